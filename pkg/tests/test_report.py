"""Report objects: certification checks, violations, canonical payloads."""

import json
import math
from fractions import Fraction

from aecover.core import Assignment
from aecover.report import BenchReport, SolveReport, ratio_within


def make_report(value, bound, exact=None) -> SolveReport:
    return SolveReport(
        instance_digest="d" * 64,
        algorithm="general",
        assignment=Assignment.of({"a": value}),
        value=Fraction(value),
        theta=Fraction(1),
        delta=2,
        claimed_bound=bound,
        bound_label="test",
        exact_value=None if exact is None else Fraction(exact),
    )


def test_ratio_within_handles_both_bound_kinds():
    assert ratio_within(Fraction(73, 60), Fraction(73, 60))
    assert not ratio_within(Fraction(74, 60), Fraction(73, 60))
    assert ratio_within(Fraction(1), 1.2785)
    assert ratio_within(Fraction(3, 2), None)


def test_certified_flags():
    assert make_report(5, Fraction(2)).certified()  # no exact value attached
    assert make_report(5, Fraction(2), exact=4).certified()
    assert not make_report(9, Fraction(2), exact=4).certified()
    zero_opt = make_report(0, Fraction(2), exact=0)
    assert zero_opt.empirical_ratio == 1
    bad_zero = make_report(1, Fraction(2), exact=0)
    assert bad_zero.empirical_ratio is None and not bad_zero.certified()


def test_wall_time_never_serialized():
    report = make_report(5, Fraction(2), exact=4)
    report.wall_time_s = 1.23
    doc = report.to_doc()
    assert "wall_time" not in json.dumps(doc)
    assert doc["empirical_ratio"] == "1.2500"
    assert doc["theta"] == "1"


def test_infinite_theta_serialized_as_inf():
    report = make_report(5, None)
    report.theta = math.inf
    assert report.to_doc()["theta"] == "inf"


def test_bench_report_records_violations_and_orders_entries():
    bench = BenchReport(family="unit", seed_start=0, seed_end=1, algorithms=("a",))
    good = make_report(4, Fraction(2), exact=4)
    bad = make_report(9, Fraction(2), exact=4)
    bench.add_entry(1, "x" * 64, Fraction(4), {"a": good})
    bench.add_entry(0, "y" * 64, Fraction(4), {"a": bad})
    assert not bench.ok()
    assert bench.violations == [
        {
            "seed": 0,
            "algorithm": "a",
            "value": "9",
            "exact_value": "4",
            "claimed_bound": "2.0000",
        }
    ]
    doc = bench.to_doc()
    assert [e["seed"] for e in doc["entries"]] == [0, 1]
    assert doc["aggregates"]["a"]["max_ratio"] == "2.2500"
    assert doc["aggregates"]["a"]["mean_ratio"] == "1.6250"
