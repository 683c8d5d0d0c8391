"""Solver for arbitrary thresholds via the density greedy plus completion.

The greedy state tracks the fixed q assignment plus accumulated increments;
the potential is Q plus the c-cost of the still-uncovered terminals, the
payment is the total increment.  Augmentations are proper stars: a root with
a value increment and a set of uncovered terminal leaves, chosen to minimize
payment per unit of covered c-cost.  Whatever the greedy leaves uncovered is
finished by raising, per terminal, the endpoints of its cheapest edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .bounds import omega
from .core import (
    Assignment,
    DerivedCosts,
    Instance,
    ZERO,
    covered_terminals,
    covers,
    derive_costs,
    uncovered_cost,
)
from .fileio import instance_digest
from .gmc import Augmentation, GreedyTrace, gmc_greedy
from .report import SolveReport


@dataclass(frozen=True)
class CandidateStar:
    """A root increment plus leaf increments covering new terminals."""

    root: str
    root_increment: Fraction
    leaves: tuple[tuple[str, Fraction], ...]
    gain: Fraction
    density: Fraction

    def payment(self) -> Fraction:
        return self.root_increment + sum((b for _, b in self.leaves), ZERO)


@dataclass(frozen=True)
class GeneralSolveState:
    totals: Mapping[str, Fraction]
    extra: Mapping[str, Fraction]
    covered: frozenset[str]
    nu: Fraction


def initial_state(inst: Instance, costs: DerivedCosts) -> GeneralSolveState:
    totals = {n: ZERO for n in inst.nodes}
    totals.update(costs.q)
    covered = covered_terminals(inst, totals)
    nu = costs.Q + uncovered_cost(inst, costs, covered)
    return GeneralSolveState(totals=totals, extra={}, covered=covered, nu=nu)


def min_density_star(
    inst: Instance, costs: DerivedCosts, state: GeneralSolveState
) -> Optional[CandidateStar]:
    """Star of globally minimum density, or None when no star gains anything.

    Enumerates every (root, root increment) pair with the increment drawn
    from the root's incident edge thresholds (zero included), collects the
    reachable uncovered terminals with their minimal increments, and grows
    the leaf set in increasing increment-per-cost order while the density
    strictly decreases.  Terminals with zero c never enter a leaf set; an
    uncovered terminal root contributes its own c to the gain.  Ties are
    broken by (density, root id, increment).
    """
    index = inst.index
    best: Optional[tuple] = None
    best_star: Optional[CandidateStar] = None
    for v in inst.nodes:
        ids = inst.edges_at[v]
        if not ids:
            continue
        tot_v = state.totals[v]
        increments = {ZERO}
        for ei in ids:
            increments.add(max(ZERO, inst.edges[ei].threshold_at(v) - tot_v))
        root_gain = (
            costs.c[v]
            if v in inst.terminals and v not in state.covered
            else ZERO
        )
        for w in sorted(increments):
            reachable: dict[str, Fraction] = {}
            for ei in ids:
                e = inst.edges[ei]
                if e.threshold_at(v) > tot_v + w:
                    continue
                u = e.other(v)
                if u not in inst.terminals or u in state.covered:
                    continue
                if costs.c[u] == 0:
                    continue
                need = max(ZERO, e.threshold_at(u) - state.totals[u])
                if u not in reachable or need < reachable[u]:
                    reachable[u] = need
            if not reachable:
                continue
            order = sorted(reachable, key=lambda u: (reachable[u] / costs.c[u], index[u]))
            pay, gain = w, root_gain
            leaves: list[tuple[str, Fraction]] = []
            for u in order:
                b_u, c_u = reachable[u], costs.c[u]
                # Adding u lowers the density iff b_u/c_u < pay/gain.
                if leaves and b_u * gain >= pay * c_u:
                    break
                leaves.append((u, b_u))
                pay += b_u
                gain += c_u
            density = pay / gain
            key = (density, index[v], w)
            if best is None or key < best:
                best = key
                best_star = CandidateStar(
                    root=v,
                    root_increment=w,
                    leaves=tuple(leaves),
                    gain=gain,
                    density=density,
                )
    return best_star


class _GeneralGmcProblem:
    """Potential Q + c(uncovered), payment = total increment, star oracle."""

    def __init__(self, inst: Instance, costs: DerivedCosts):
        self.inst = inst
        self.costs = costs

    def initial_state(self) -> GeneralSolveState:
        return initial_state(self.inst, self.costs)

    def potential(self, state: GeneralSolveState) -> Fraction:
        return state.nu

    def target(self) -> Fraction:
        return self.costs.Q

    def best_augmentation(self, state: GeneralSolveState) -> Optional[Augmentation]:
        star = min_density_star(self.inst, self.costs, state)
        if star is None:
            return None
        return Augmentation(
            payload=star,
            payment=star.payment(),
            predicted_potential=state.nu - star.gain,
        )

    def apply(self, state: GeneralSolveState, aug: Augmentation) -> GeneralSolveState:
        star: CandidateStar = aug.payload
        totals = dict(state.totals)
        extra = dict(state.extra)
        for node, inc in ((star.root, star.root_increment), *star.leaves):
            if inc != 0:
                totals[node] += inc
                extra[node] = extra.get(node, ZERO) + inc
        covered = covered_terminals(self.inst, totals)
        nu = self.costs.Q + uncovered_cost(self.inst, self.costs, covered)
        return GeneralSolveState(totals=totals, extra=extra, covered=covered, nu=nu)


def complete(inst: Instance, costs: DerivedCosts, state: GeneralSolveState) -> Assignment:
    """Feasible assignment of value at most payment + potential: every still
    uncovered terminal raises both endpoints of its cheapest edge."""
    values = {n: x for n, x in state.totals.items() if x > 0}
    for u in inst.terminal_list:
        if u in state.covered:
            continue
        e = inst.edges[costs.cheapest[u]]
        for node in (e.u, e.v):
            t = e.threshold_at(node)
            if values.get(node, ZERO) < t:
                values[node] = t
    return Assignment.of(values)


def run_general_greedy(
    inst: Instance, costs: DerivedCosts
) -> tuple[GeneralSolveState, GreedyTrace]:
    return gmc_greedy(_GeneralGmcProblem(inst, costs))


def general_bound_candidates(
    costs: DerivedCosts, terminals_independent: bool
) -> list[tuple[str, object]]:
    candidates: list[tuple[str, object]] = []
    if costs.theta == 0:
        candidates.append(("value=Q (slope 0)", Fraction(1)))
    elif costs.theta != math.inf:
        candidates.append(("1+omega(theta)", 1.0 + omega(costs.theta)))
    if costs.delta >= 1:
        candidates.append(("1+ln(delta+1)", 1.0 + math.log(costs.delta + 1)))
        if terminals_independent:
            candidates.append(("1+ln(delta)", 1.0 + math.log(costs.delta)))
    return candidates


def solve_general(inst: Instance) -> SolveReport:
    """Density-greedy solver with the slope/degree ratio certificate."""
    costs = derive_costs(inst)
    state, trace = run_general_greedy(inst, costs)
    assignment = complete(inst, costs, state)
    ok, uncovered = covers(inst, assignment)
    assert ok, f"completion left terminals uncovered: {uncovered}"

    candidates = general_bound_candidates(costs, inst.terminals_independent)
    label, bound = min(candidates, key=lambda it: (float(it[1]), it[0]))
    return SolveReport(
        instance_digest=instance_digest(inst),
        algorithm="general",
        assignment=assignment,
        value=assignment.total(),
        theta=costs.theta,
        delta=costs.delta,
        claimed_bound=bound,
        bound_label=label,
        trace=trace.to_doc(),
        extras={
            "Q": str(costs.Q),
            "C": str(costs.C),
            "greedy_steps": len(trace.steps),
        },
    )
