"""Shared brute-force oracles and helpers for the test suite.

These oracles deliberately re-derive results by exhaustive enumeration,
independent of the library's algorithms, so ratio and equality assertions
have teeth.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from aecover.core import (
    Instance,
    ZERO,
    covered_terminals,
)


def enum_min_density_star(inst, costs, totals, covered):
    """Minimum star density by exhaustive enumeration.

    Considers every root, every nonempty subset of adjacent uncovered
    positive-cost terminals, and every per-leaf edge choice; the root pays
    the largest shortfall of the chosen edges on its side, each leaf pays its
    own shortfall, and an uncovered terminal root adds its c to the gain.
    Returns the minimum density or None when no star has positive gain.
    """
    best = None
    for v in inst.nodes:
        leaf_options: list[tuple[str, list]] = []
        seen = set()
        for ei in inst.edges_at[v]:
            u = inst.edges[ei].other(v)
            if u in inst.terminals and u not in covered and costs.c[u] > 0 and u not in seen:
                seen.add(u)
                edges_uv = [
                    inst.edges[ej]
                    for ej in inst.edges_at[v]
                    if inst.edges[ej].other(v) == u
                ]
                leaf_options.append((u, edges_uv))
        if not leaf_options:
            continue
        root_gain = (
            costs.c[v] if v in inst.terminals and v not in covered else ZERO
        )
        choice_space = [[None] + edges for _, edges in leaf_options]
        for combo in itertools.product(*choice_space):
            if all(c is None for c in combo):
                continue
            w = ZERO
            pay_leaves = ZERO
            gain = root_gain
            for (u, _), e in zip(leaf_options, combo):
                if e is None:
                    continue
                w = max(w, e.threshold_at(v) - totals[v])
                pay_leaves += max(ZERO, e.threshold_at(u) - totals[u])
                gain += costs.c[u]
            w = max(w, ZERO)
            density = (w + pay_leaves) / gain
            if best is None or density < best:
                best = density
    return best


def brute_force_node_levels(inst) -> Fraction:
    """Optimal value by enumerating per-node values over zero plus the node's
    incident thresholds; complete because optima are threshold maxima."""
    candidates = []
    for n in inst.nodes:
        levels = {ZERO}
        for ei in inst.edges_at[n]:
            levels.add(inst.edges[ei].threshold_at(n))
        candidates.append(sorted(levels))
    best = None
    for values in itertools.product(*candidates):
        valmap = dict(zip(inst.nodes, values))
        if covered_terminals(inst, valmap) == inst.terminals:
            total = sum(values, ZERO)
            if best is None or total < best:
                best = total
    assert best is not None, "instance is infeasible"
    return best


def enum_setcover_optimum(elements, sets) -> int:
    """Minimum cover size by subset enumeration."""
    universe = set(elements)
    ids = list(sets)
    best = None
    for r in range(len(ids) + 1):
        if best is not None:
            break
        for combo in itertools.combinations(ids, r):
            covered = set()
            for v in combo:
                covered |= sets[v]
            if covered >= universe:
                best = r
                break
    assert best is not None, "set system is infeasible"
    return best


def random_set_system(rng: random.Random, n_elements: int, n_sets: int, max_size: int):
    """Random feasible set system with sizes capped at max_size; the element
    count is clamped so the sets can actually cover them."""
    from aecover.unit import SetCoverInstance

    n_elements = min(n_elements, n_sets * max_size)
    elements = tuple(f"x{i:02d}" for i in range(n_elements))
    while True:
        sets = {}
        for j in range(n_sets):
            size = rng.randint(1, max_size)
            sets[f"s{j:02d}"] = frozenset(rng.sample(elements, min(size, n_elements)))
        if set().union(*sets.values()) == set(elements):
            return SetCoverInstance(elements=elements, sets=sets)


@pytest.fixture
def tiny_instance() -> Instance:
    return Instance.from_data(["u", "v"], ["u"], [("u", "v", 2, 3)])
