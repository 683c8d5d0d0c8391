"""Solve and bench report objects with canonical serialization.

Serialized reports are deterministic: rationals are written as fraction
strings, floats with four decimals, and wall-clock time never enters the
canonical payload (it is reported on stderr by the CLI instead).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

from .core import Assignment
from .fileio import SCHEMA_VERSION, assignment_doc, format_float, format_fraction

Bound = Union[Fraction, float]

# Slack for comparing exact ratios against float-valued bounds; matches the
# residual tolerance of the omega root solver.
_FLOAT_BOUND_SLACK = 1e-12


def bound_to_float(bound: Bound) -> float:
    return float(bound)


def ratio_within(ratio: Fraction, bound: Optional[Bound]) -> bool:
    if bound is None:
        return True
    if isinstance(bound, Fraction):
        return ratio <= bound
    return float(ratio) <= bound + _FLOAT_BOUND_SLACK


@dataclass
class SolveReport:
    instance_digest: str
    algorithm: str
    assignment: Assignment
    value: Fraction
    theta: Union[Fraction, float]
    delta: int
    claimed_bound: Optional[Bound]
    bound_label: str
    exact_value: Optional[Fraction] = None
    exact_optimal: bool = True
    trace: Optional[dict] = None
    extras: dict = field(default_factory=dict)
    wall_time_s: Optional[float] = None

    @property
    def empirical_ratio(self) -> Optional[Fraction]:
        if self.exact_value is None:
            return None
        if self.exact_value == 0:
            return Fraction(1) if self.value == 0 else None
        return self.value / self.exact_value

    def certified(self) -> bool:
        """True when no exact value is attached or the ratio meets the bound."""
        ratio = self.empirical_ratio
        if ratio is None:
            return self.exact_value is None
        return ratio_within(ratio, self.claimed_bound)

    def to_doc(self, with_assignment: bool = True) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "kind": "solve_report",
            "instance_digest": self.instance_digest,
            "algorithm": self.algorithm,
            "value": format_fraction(self.value),
            "theta": "inf" if self.theta == math.inf else format_fraction(Fraction(self.theta)),
            "delta": self.delta,
            "claimed_bound": None
            if self.claimed_bound is None
            else format_float(bound_to_float(self.claimed_bound)),
            "bound_label": self.bound_label,
        }
        if with_assignment:
            doc["assignment"] = assignment_doc(self.assignment)
        if self.exact_value is not None:
            doc["exact_value"] = format_fraction(self.exact_value)
            doc["exact_optimal"] = self.exact_optimal
            ratio = self.empirical_ratio
            doc["empirical_ratio"] = format_float(float(ratio)) if ratio is not None else None
        if self.trace is not None:
            doc["trace"] = self.trace
        if self.extras:
            doc["extras"] = self.extras
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, indent=2) + "\n"


@dataclass
class BenchReport:
    family: str
    seed_start: int
    seed_end: int
    algorithms: tuple[str, ...]
    entries: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    def add_entry(self, seed: int, digest: str, exact_value: Optional[Fraction],
                  reports: dict[str, SolveReport]) -> None:
        entry: dict[str, Any] = {
            "seed": seed,
            "instance_digest": digest,
            "exact_value": None if exact_value is None else format_fraction(exact_value),
            "results": {},
        }
        for name in sorted(reports):
            rep = reports[name]
            ratio = rep.empirical_ratio
            entry["results"][name] = {
                "value": format_fraction(rep.value),
                "claimed_bound": None
                if rep.claimed_bound is None
                else format_float(bound_to_float(rep.claimed_bound)),
                "bound_label": rep.bound_label,
                "empirical_ratio": None if ratio is None else format_float(float(ratio)),
            }
            if not rep.certified():
                self.violations.append(
                    {
                        "seed": seed,
                        "algorithm": name,
                        "value": format_fraction(rep.value),
                        "exact_value": format_fraction(rep.exact_value),
                        "claimed_bound": format_float(bound_to_float(rep.claimed_bound))
                        if rep.claimed_bound is not None
                        else None,
                    }
                )
        self.entries.append(entry)

    def aggregates(self) -> dict[str, Any]:
        stats: dict[str, Any] = {}
        for name in self.algorithms:
            ratios = []
            for entry in self.entries:
                res = entry["results"].get(name)
                if res and res["empirical_ratio"] is not None:
                    ratios.append(Fraction(res["value"]) / Fraction(entry["exact_value"])
                                  if Fraction(entry["exact_value"]) != 0 else Fraction(1))
            if ratios:
                stats[name] = {
                    "instances": len(ratios),
                    "max_ratio": format_float(float(max(ratios))),
                    "mean_ratio": format_float(float(sum(ratios) / len(ratios))),
                }
        return stats

    def to_doc(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "bench_report",
            "family": self.family,
            "seeds": f"{self.seed_start}..{self.seed_end}",
            "algorithms": list(self.algorithms),
            "entries": sorted(self.entries, key=lambda e: e["seed"]),
            "aggregates": self.aggregates(),
            "violations": self.violations,
            "skipped": self.skipped,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, indent=2) + "\n"

    def ok(self) -> bool:
        return not self.violations
