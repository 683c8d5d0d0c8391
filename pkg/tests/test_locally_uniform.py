"""Average-price greedy: validation, worst case, and per-star accounting."""

from fractions import Fraction

import pytest

from aecover.bounds import harmonic, omega_bar
from aecover.core import Instance, covers, derive_costs
from aecover.errors import Infeasible, NonUniformFacility, NotBipartite
from aecover.generators import (
    from_facility_location,
    from_theta_setcover,
    random_uniform,
    tight73,
)
from aecover.locally_uniform import solve_locally_uniform, validate_locally_uniform
from aecover.oracle import exact_solve, exact_star_decomposition


class TestValidate:
    def test_facility_location_uniform_succeeds(self):
        inst = from_facility_location(
            ["a", "b"],
            ["f", "g"],
            {"f": 3, "g": 1},
            {("a", "f"): 2, ("b", "f"): 2, ("a", "g"): 1, ("b", "g"): 1},
        )
        ubi = validate_locally_uniform(inst)
        assert ubi.weight["f"] == 3 and ubi.service["f"] == 2
        assert ubi.theta == Fraction(3, 2)
        assert ubi.delta == 2

    def test_non_uniform_facility(self):
        inst = Instance.from_data(
            ["a", "b", "f"],
            ["a", "b"],
            [("a", "f", 1, 2), ("b", "f", 3, 2)],
        )
        with pytest.raises(NonUniformFacility):
            validate_locally_uniform(inst)

    def test_terminal_terminal_edge_rejected(self):
        inst = Instance.from_data(["a", "b"], ["a", "b"], [("a", "b", 1, 1)])
        with pytest.raises(NotBipartite):
            validate_locally_uniform(inst)

    def test_facility_facility_edge_rejected(self):
        inst = Instance.from_data(
            ["a", "f", "g"], ["a"], [("a", "f", 1, 1), ("f", "g", 1, 1)]
        )
        with pytest.raises(NotBipartite):
            validate_locally_uniform(inst)

    def test_epsilon_setcover_reduction(self):
        eps = Fraction(1, 4)
        inst = from_theta_setcover(
            {"s1": ["x", "y"], "s2": ["y", "z"]},
            ["x", "y", "z"],
            {"s1": 1, "s2": 1},
            Fraction(1) / eps,
        )
        ubi = validate_locally_uniform(inst)
        assert all(t == eps for t in ubi.service.values())
        assert ubi.theta == 4  # slope 1/eps for unit weights


class TestSolve:
    def test_single_facility_star(self):
        clients = [f"c{i}" for i in range(5)]
        inst = from_facility_location(
            clients, ["f"], {"f": 1}, {(c, "f"): 1 for c in clients}
        )
        report = solve_locally_uniform(validate_locally_uniform(inst))
        assert report.value == 6
        assert exact_solve(inst).value == 6

    def test_tight_example_both_orders(self):
        inst, priority = tight73()
        ubi = validate_locally_uniform(inst)
        assert ubi.theta == 1 and ubi.delta == 4
        best = solve_locally_uniform(ubi)
        worst = solve_locally_uniform(ubi, tie_break="adversarial-order", priority=priority)
        assert best.value == 60
        assert worst.value == 73
        assert worst.claimed_bound == Fraction(73, 60)
        opt = exact_solve(inst, max_terminals=48, max_nodes=80).value
        assert opt == 60
        assert worst.value / opt == Fraction(73, 60)

    def test_adversarial_requires_priority(self):
        inst, _ = tight73()
        with pytest.raises(ValueError):
            solve_locally_uniform(
                validate_locally_uniform(inst), tie_break="adversarial-order"
            )

    def test_infeasible_client(self):
        inst = Instance.from_data(
            ["a", "b", "f"], ["a", "b"], [("a", "f", 1, 1)]
        )
        with pytest.raises(Infeasible):
            solve_locally_uniform(validate_locally_uniform(inst))

    def test_certified_on_seeds(self):
        for seed in range(60):
            inst = random_uniform(seed, theta=5)
            ubi = validate_locally_uniform(inst)
            report = solve_locally_uniform(ubi)
            assert covers(inst, report.assignment)[0]
            opt = exact_solve(inst).value
            ratio = report.value / opt
            assert ratio <= 1 + omega_bar(ubi.theta, delta_cap=ubi.delta)

    def test_facility_slope_bounds_instance_slope(self):
        for seed in range(30):
            inst = random_uniform(seed, theta=3)
            ubi = validate_locally_uniform(inst)
            costs = derive_costs(inst)
            assert costs.theta <= ubi.theta <= 3

    def test_free_service_facility_gives_infinite_slope(self):
        # Weighted set cover shape: zero client-side thresholds, positive
        # weights; only the harmonic-number certificate applies.
        inst = Instance.from_data(
            ["a", "b", "f", "g"],
            ["a", "b"],
            [("a", "f", 0, 2), ("b", "f", 0, 2), ("b", "g", 0, 1)],
        )
        ubi = validate_locally_uniform(inst)
        assert ubi.theta == float("inf") and ubi.delta == 2
        report = solve_locally_uniform(ubi)
        assert report.claimed_bound == harmonic(2)
        assert report.value == 2  # one facility serves both clients
        assert report.value <= report.claimed_bound * exact_solve(inst).value


class TestSetCoverCoincidence:
    @staticmethod
    def classical_greedy_sequence(ubi):
        uncovered = set(ubi.clients)
        sequence = []
        while uncovered:
            best = None
            for v in ubi.facilities:
                if v in sequence:
                    continue
                k = sum(1 for c in ubi.adjacency[v] if c in uncovered)
                if k == 0:
                    continue
                key = (-k, ubi.inst.index[v])
                if best is None or key < best[0]:
                    best = (key, v)
            assert best is not None
            v = best[1]
            sequence.append(v)
            uncovered -= set(ubi.adjacency[v])
        return sequence

    def test_unit_instances_match_classical_greedy(self):
        for seed in range(40):
            inst = random_uniform(seed, theta=1, unit=True)
            ubi = validate_locally_uniform(inst)
            report = solve_locally_uniform(ubi)
            picked = [step["facility"] for step in report.trace["steps"]]
            assert picked == self.classical_greedy_sequence(ubi)


class TestPerStarAccounting:
    def test_payment_bound_per_optimal_star(self):
        for seed in range(40):
            inst = random_uniform(seed, theta=4)
            ubi = validate_locally_uniform(inst)
            report = solve_locally_uniform(ubi)
            result = exact_solve(inst)
            stars = exact_star_decomposition(inst, result.assignment)
            price_of = {}
            step_of = {}
            for i, step in enumerate(report.trace["steps"]):
                for c in step["clients"]:
                    price_of[c] = Fraction(step["price"])
                    step_of[c] = i
            for star in stars:
                if star.root in inst.terminals:
                    continue  # bipartite: roots are facilities
                w = ubi.weight[star.root]
                t = ubi.service[star.root]
                k = len(star.leaves)
                order = sorted(star.leaves, key=lambda c: step_of[c], reverse=True)
                total = Fraction(0)
                for i, c in enumerate(order, start=1):
                    assert price_of[c] <= w / i + t
                    total += price_of[c]
                assert total <= w * harmonic(k) + k * t
