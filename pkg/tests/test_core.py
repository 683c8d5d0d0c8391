"""Instance model, derived costs, activation, and the levels reduction."""

import itertools
import random
from fractions import Fraction

import pytest

from aecover.core import (
    ActivationSpec,
    Assignment,
    InstallationActivation,
    Instance,
    SpecEdge,
    TableActivation,
    ZERO,
    activated_edges,
    cheapest_edge_cover,
    covers,
    derive_costs,
    levels_reduction,
    q_assignment,
)
from aecover.errors import EmptyLevels, InvalidInstance, IsolatedTerminal
from aecover.generators import random_general, random_minpower
from aecover.oracle import exact_solve


class TestInstance:
    def test_canonical_edge_order(self):
        inst = Instance.from_data(
            ["a", "b", "c"],
            ["a"],
            [("c", "a", 5, 1), ("b", "a", 2, 1), ("a", "b", 1, 3)],
        )
        keys = [(inst.index[e.u], inst.index[e.v], e.tu, e.tv) for e in inst.edges]
        assert keys == sorted(keys)
        # Orientation follows node order and thresholds stay with their
        # endpoint; the (1,3) parallel edge is dominated by (1,2) and pruned.
        assert [(e.u, e.v, e.tu, e.tv) for e in inst.edges] == [
            ("a", "b", 1, 2),
            ("a", "c", 1, 5),
        ]

    def test_dominated_parallel_edges_pruned(self):
        inst = Instance.from_data(
            ["a", "b"],
            ["a"],
            [("a", "b", 1, 2), ("a", "b", 2, 3), ("a", "b", 1, 2), ("a", "b", 2, 1)],
        )
        assert len(inst.edges) == 2  # (1,2) and (2,1) are incomparable
        assert {(e.tu, e.tv) for e in inst.edges} == {(1, 2), (2, 1)}

    def test_validation_errors(self):
        with pytest.raises(InvalidInstance):
            Instance.from_data(["a"], [], [("a", "a", 1, 1)])
        with pytest.raises(InvalidInstance):
            Instance.from_data(["a"], ["b"], [])
        with pytest.raises(InvalidInstance):
            Instance.from_data(["a", "b"], [], [("a", "b", -1, 0)])
        with pytest.raises(InvalidInstance):
            Instance.from_data(["a", "a"], [], [])

    def test_assignment_algebra(self):
        a = Assignment.of({"x": Fraction(1, 2), "y": 0})
        b = Assignment.of({"x": "3/2", "z": 1})
        assert a.total() == Fraction(1, 2)
        assert "y" not in a.values
        assert (a + b).total() == (b + a).total() == Fraction(3)
        assert (a + b).get("x") == 2
        assert a.leq(a + b)


class TestDeriveCosts:
    def test_single_edge(self, tiny_instance):
        costs = derive_costs(tiny_instance)
        assert costs.q["u"] == 2 and costs.c["u"] == 3
        assert costs.Q == 2 and costs.C == 3
        assert costs.theta == Fraction(3, 2)
        assert costs.delta == 1

    def test_two_edge_minimum(self):
        inst = Instance.from_data(
            ["u", "v", "w"], ["u"], [("u", "v", 2, 3), ("u", "w", 1, 10)]
        )
        costs = derive_costs(inst)
        assert costs.q["u"] == 1
        assert costs.c["u"] == 4  # min edge value 5 comes from the (2,3) edge

    def test_minpower_theta_at_most_one(self):
        for seed in range(25):
            inst = random_minpower(8, 14, seed)
            assert derive_costs(inst).theta <= 1

    def test_isolated_terminal(self):
        inst = Instance.from_data(["u", "v", "w"], ["u", "w"], [("u", "v", 1, 1)])
        with pytest.raises(IsolatedTerminal):
            derive_costs(inst)

    def test_zero_cost_terminal_excluded_from_slope(self):
        inst = Instance.from_data(
            ["u", "v", "x", "y"],
            ["u", "x"],
            [("u", "v", 0, 0), ("x", "y", 1, 2)],
        )
        costs = derive_costs(inst)
        assert costs.theta == 2  # the 0/0 terminal imposes no constraint

    def test_infinite_slope(self):
        inst = Instance.from_data(["u", "v"], ["u"], [("u", "v", 0, 5)])
        costs = derive_costs(inst)
        assert costs.theta == float("inf")


class TestActivation:
    def test_zero_assignment_activates_nothing(self, tiny_instance):
        assert activated_edges(tiny_instance, Assignment.zero()) == ()
        ok, uncovered = covers(tiny_instance, Assignment.zero())
        assert not ok and uncovered == ("u",)

    def test_boundary_equality_activates(self, tiny_instance):
        a = Assignment.of({"u": 2, "v": 3})
        assert activated_edges(tiny_instance, a) == (0,)
        assert covers(tiny_instance, a) == (True, ())

    def test_monotonicity(self):
        rng = random.Random(7)
        for seed in range(20):
            inst = random_general(7, 12, 3, seed)
            lo_vals = {
                n: Fraction(rng.randint(0, 4), 2) for n in inst.nodes
            }
            hi_vals = {n: v + Fraction(rng.randint(0, 3), 2) for n, v in lo_vals.items()}
            lo, hi = Assignment.of(lo_vals), Assignment.of(hi_vals)
            assert set(activated_edges(inst, lo)) <= set(activated_edges(inst, hi))

    def test_cheapest_cover_feasible_and_bounded(self):
        for seed in range(30):
            inst = random_general(8, 14, 3, seed)
            costs = derive_costs(inst)
            cover = cheapest_edge_cover(inst, costs)
            assert covers(inst, cover)[0]
            assert cover.total() <= costs.Q + costs.C

    def test_sandwich_against_oracle(self):
        for seed in range(30):
            inst = random_general(7, 12, 3, seed)
            costs = derive_costs(inst)
            opt = exact_solve(inst).value
            assert costs.Q <= opt <= costs.Q + costs.C
            if costs.theta_finite():
                assert costs.Q + costs.C <= (costs.theta + 1) * opt


class TestLevelsReduction:
    def test_installation_pareto_pairs(self):
        levels = tuple(Fraction(x) for x in (0, 5, 15, 20))
        spec = ActivationSpec(
            nodes=("u", "v"),
            levels={"u": levels, "v": levels},
            edges=(
                SpecEdge("u", "v", InstallationActivation(Fraction(10), Fraction(1), Fraction(1))),
            ),
        )
        inst = levels_reduction(spec, ["u"])
        pairs = {(e.threshold_at("u"), e.threshold_at("v")) for e in inst.edges}
        assert pairs == {(0, 15), (5, 5), (15, 0)}

    def test_all_false_table_emits_nothing(self):
        lv = (Fraction(0), Fraction(1))
        spec = ActivationSpec(
            nodes=("u", "v"),
            levels={"u": lv, "v": lv},
            edges=(SpecEdge("u", "v", TableActivation({})),),
        )
        inst = levels_reduction(spec, [])
        assert inst.edges == ()

    def test_empty_levels(self):
        spec = ActivationSpec(
            nodes=("u", "v"),
            levels={"u": (Fraction(1),), "v": ()},
            edges=(SpecEdge("u", "v", TableActivation({})),),
        )
        with pytest.raises(EmptyLevels):
            levels_reduction(spec, [])

    def test_non_monotone_table_rejected(self):
        lv = (Fraction(0), Fraction(1))
        table = {(Fraction(0), Fraction(0)): True, (Fraction(1), Fraction(1)): False}
        spec = ActivationSpec(
            nodes=("u", "v"),
            levels={"u": lv, "v": lv},
            edges=(SpecEdge("u", "v", TableActivation(table)),),
        )
        with pytest.raises(InvalidInstance):
            levels_reduction(spec, [])

    def _random_monotone_table(self, rng, lu, lv):
        # Random threshold surface: activate above a random staircase.
        cuts = {a: rng.randint(0, len(lv)) for a in range(len(lu))}
        # Enforce monotonicity: cuts non-increasing in a.
        ordered = sorted(cuts.values(), reverse=True)
        table = {}
        for i, a in enumerate(lu):
            for j, b in enumerate(lv):
                table[(a, b)] = j >= ordered[i]
        return TableActivation(table)

    def test_reduction_matches_level_brute_force(self):
        rng = random.Random(42)
        levels = tuple(Fraction(x) for x in (0, 1, 2))
        for _ in range(50):
            n = rng.randint(3, 5)
            nodes = [f"n{i}" for i in range(n)]
            terminals = rng.sample(nodes, rng.randint(1, n - 1))
            pairs = [
                (nodes[i], nodes[j])
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.7
            ]
            if not pairs:
                continue
            edges = tuple(
                SpecEdge(u, v, self._random_monotone_table(rng, levels, levels))
                for u, v in pairs
            )
            spec = ActivationSpec(
                nodes=tuple(nodes), levels={x: levels for x in nodes}, edges=edges
            )
            inst = levels_reduction(spec, terminals)
            if any(not inst.edges_at[t] for t in terminals):
                continue  # infeasible draw; nothing to compare
            opt = exact_solve(inst).value
            brute = self._brute_force_spec(spec, terminals, levels)
            assert opt == brute

    @staticmethod
    def _brute_force_spec(spec, terminals, levels):
        choices = sorted({ZERO} | set(levels))
        best = None
        for values in itertools.product(choices, repeat=len(spec.nodes)):
            valmap = dict(zip(spec.nodes, values))
            covered = set()
            for se in spec.edges:
                if se.rule.activates(valmap[se.u], valmap[se.v]):
                    covered.update((se.u, se.v))
            if set(terminals) <= covered:
                total = sum(values, ZERO)
                if best is None or total < best:
                    best = total
        assert best is not None
        return best


class TestQAssignment:
    def test_q_on_terminals_only(self, tiny_instance):
        costs = derive_costs(tiny_instance)
        qa = q_assignment(costs)
        assert qa.get("u") == 2 and qa.get("v") == 0
