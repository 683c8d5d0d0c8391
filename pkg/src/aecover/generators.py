"""Instance constructors: named-problem reductions, seeded random families,
and the 73/60 tight example for the average-price greedy.

Every generator is a pure function of its arguments and seed; identical specs
produce byte-identical instance files.  Random families reject and redraw
infeasible graphs instead of repairing them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .core import (
    ActivationSpec,
    Instance,
    InstallationActivation,
    Rational,
    SpecEdge,
    as_fraction,
)
from .errors import DomainError, GenerationFailed

_RETRY_BUDGET = 500


# ---------------------------------------------------------------------------
# Reductions from named problems


def from_facility_location(
    clients: Sequence[str],
    facilities: Sequence[str],
    opening: Mapping[str, Rational],
    service: Mapping[tuple[str, str], Rational],
) -> Instance:
    """Facility location as a bipartite instance: an edge per available
    (client, facility) pair with the service cost on the client side and the
    opening cost on the facility side."""
    edges = []
    for (u, v), d in service.items():
        w = as_fraction(opening[v])
        d = as_fraction(d)
        if w < 0 or d < 0:
            raise DomainError(f"negative cost on pair ({u}, {v})")
        edges.append((u, v, d, w))
    return Instance.from_data(list(clients) + list(facilities), clients, edges)


def from_theta_setcover(
    sets: Mapping[str, Iterable[str]],
    elements: Sequence[str],
    weights: Mapping[str, Rational],
    theta: Rational,
) -> Instance:
    """Weighted set cover where picking a set also charges weight/theta per
    covered element; the resulting slope is at most theta."""
    th = as_fraction(theta)
    if th <= 0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    edges = []
    for v, members in sets.items():
        w = as_fraction(weights[v])
        if w < 0:
            raise DomainError(f"negative weight for set {v!r}")
        for u in members:
            edges.append((u, v, w / th, w))
    return Instance.from_data(list(elements) + list(sets), elements, edges)


def from_installation(
    nodes: Sequence[str],
    terminals: Sequence[str],
    demands: Mapping[tuple[str, str], Rational],
    coefficients: Mapping[tuple[str, str], tuple[Rational, Rational]],
    levels: Mapping[str, Sequence[Rational]],
) -> Instance:
    """Tower-height model: a uv pair opens when the scaled heights reach its
    demand; expanded to threshold edges over the level grids."""
    spec_edges = []
    for pair, h in demands.items():
        u, v = pair
        cu, cv = coefficients[pair]
        cu, cv, h = as_fraction(cu), as_fraction(cv), as_fraction(h)
        if cu <= 0 or cv <= 0:
            raise DomainError(f"coefficients must be positive on pair {pair}")
        if h < 0:
            raise DomainError(f"negative demand on pair {pair}")
        spec_edges.append(SpecEdge(u, v, InstallationActivation(h, cu, cv)))
    spec = ActivationSpec(
        nodes=tuple(nodes),
        levels={n: tuple(as_fraction(x) for x in lv) for n, lv in levels.items()},
        edges=tuple(spec_edges),
    )
    from .core import levels_reduction

    return levels_reduction(spec, terminals)


# ---------------------------------------------------------------------------
# Seeded random families


def _random_graph_instance(
    rng: random.Random,
    n: int,
    m: int,
    r: int,
    draw_thresholds,
) -> Instance:
    nodes = [f"v{i:02d}" for i in range(n)]
    terminals = sorted(rng.sample(nodes, r))
    for _ in range(_RETRY_BUDGET):
        edges = []
        for _ in range(m):
            u, v = rng.sample(nodes, 2)
            tu, tv = draw_thresholds()
            edges.append((u, v, tu, tv))
        touched = {x for e in edges for x in (e[0], e[1])}
        if all(t in touched for t in terminals):
            return Instance.from_data(nodes, terminals, edges)
    raise GenerationFailed(f"no feasible draw after {_RETRY_BUDGET} attempts")


_MINPOWER_POOL = tuple(Fraction(x) for x in ("1", "3/2", "2", "3", "4"))
_GENERAL_POOL = tuple(Fraction(x) for x in ("1", "3/2", "2", "3", "5", "8"))


def random_minpower(n: int, m: int, seed: int, r: Optional[int] = None) -> Instance:
    """Equal thresholds on both edge sides; the slope is always at most 1."""
    rng = random.Random(seed)
    r = r if r is not None else rng.randint(2, min(6, n - 1))

    def draw():
        t = rng.choice(_MINPOWER_POOL)
        return t, t

    return _random_graph_instance(rng, n, m, r, draw)


def random_general(n: int, m: int, levels: int, seed: int, r: Optional[int] = None) -> Instance:
    """Independent per-endpoint thresholds from a pool of ``levels`` values."""
    if not 1 <= levels <= len(_GENERAL_POOL):
        raise DomainError(f"levels must be in 1..{len(_GENERAL_POOL)}")
    rng = random.Random(seed)
    r = r if r is not None else rng.randint(2, min(6, n - 1))
    pool = _GENERAL_POOL[:levels]

    def draw():
        return rng.choice(pool), rng.choice(pool)

    return _random_graph_instance(rng, n, m, r, draw)


def random_unit(n: int, m: int, seed: int, r: Optional[int] = None) -> Instance:
    """All thresholds exactly 1."""
    rng = random.Random(seed)
    r = r if r is not None else rng.randint(3, min(8, n - 1))

    def draw():
        return Fraction(1), Fraction(1)

    return _random_graph_instance(rng, n, m, r, draw)


_SERVICE_POOL = tuple(Fraction(x) for x in ("1", "3/2", "2"))


def random_uniform(
    seed: int,
    theta: Rational = 5,
    clients_range: tuple[int, int] = (3, 6),
    facilities_range: tuple[int, int] = (2, 4),
    unit: bool = False,
) -> Instance:
    """Random locally uniform bipartite instance with slope at most theta.

    With ``unit=True`` all weights and thresholds are 1 (the set-cover shape).
    """
    th = as_fraction(theta)
    if th <= 0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    rng = random.Random(seed)
    nc = rng.randint(*clients_range)
    nf = rng.randint(*facilities_range)
    clients = [f"t{i:02d}" for i in range(nc)]
    facilities = [f"f{i:02d}" for i in range(nf)]
    multipliers = [f for f in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), th) if f <= th]
    for _ in range(_RETRY_BUDGET):
        opening: dict[str, Fraction] = {}
        service: dict[tuple[str, str], Fraction] = {}
        for v in facilities:
            t = Fraction(1) if unit else rng.choice(_SERVICE_POOL)
            w = Fraction(1) if unit else t * rng.choice(multipliers)
            opening[v] = w
            for u in clients:
                if rng.random() < 0.6:
                    service[(u, v)] = t
        if all(any((u, v) in service for v in facilities) for u in clients):
            return from_facility_location(clients, facilities, opening, service)
    raise GenerationFailed(f"no feasible draw after {_RETRY_BUDGET} attempts")


_SET_WEIGHT_POOL = tuple(Fraction(x) for x in ("1", "2", "5/2", "3"))


def random_theta_setcover(
    seed: int,
    theta: Rational,
    elements_range: tuple[int, int] = (3, 6),
    sets_range: tuple[int, int] = (2, 4),
) -> Instance:
    rng = random.Random(seed)
    ne = rng.randint(*elements_range)
    ns = rng.randint(*sets_range)
    elements = [f"e{i:02d}" for i in range(ne)]
    set_ids = [f"s{i:02d}" for i in range(ns)]
    for _ in range(_RETRY_BUDGET):
        membership = {
            v: sorted(rng.sample(elements, rng.randint(1, ne))) for v in set_ids
        }
        covered = {x for s in membership.values() for x in s}
        if covered == set(elements):
            weights = {v: rng.choice(_SET_WEIGHT_POOL) for v in set_ids}
            return from_theta_setcover(membership, elements, weights, theta)
    raise GenerationFailed(f"no feasible draw after {_RETRY_BUDGET} attempts")


_HEIGHT_LEVELS = tuple(Fraction(x) for x in ("5", "15", "20"))
_DEMAND_POOL = tuple(Fraction(x) for x in ("10", "15", "20", "25", "30", "35", "40"))


def random_installation(
    seed: int,
    n_range: tuple[int, int] = (5, 8),
    r_range: tuple[int, int] = (2, 5),
    levels: Sequence[Rational] = _HEIGHT_LEVELS,
) -> Instance:
    """Random tower-height instances over a fixed 3-level height menu."""
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    r = rng.randint(r_range[0], min(r_range[1], n - 1))
    nodes = [f"v{i:02d}" for i in range(n)]
    terminals = sorted(rng.sample(nodes, r))
    all_pairs = [(nodes[i], nodes[j]) for i in range(n) for j in range(i + 1, n)]
    m = rng.randint(n, min(2 * n, len(all_pairs)))
    for _ in range(_RETRY_BUDGET):
        pairs = sorted(rng.sample(all_pairs, m))
        touched = {x for p in pairs for x in p}
        if not all(t in touched for t in terminals):
            continue
        demands = {p: rng.choice(_DEMAND_POOL) for p in pairs}
        coefficients = {p: (Fraction(1), Fraction(1)) for p in pairs}
        level_map = {v: tuple(levels) for v in nodes}
        return from_installation(nodes, terminals, demands, coefficients, level_map)
    raise GenerationFailed(f"no feasible draw after {_RETRY_BUDGET} attempts")


# ---------------------------------------------------------------------------
# The tight 73/60 example


def tight73() -> tuple[Instance, tuple[str, ...]]:
    """48 unit-threshold terminals, 12 upper covering nodes (the optimum) and
    13 bottom nodes wired so that a bottoms-first tie order makes the
    average-price greedy pay 73 instead of 60.

    Bottom nodes of degree 4 hit leaf 0 of four distinct upper stars, degree 3
    leaf 1 of three stars, degree 2 leaf 2 of two stars; leaf 3 of every star
    is reachable only from its upper node.  Returns the instance and the
    adversarial facility priority order (bottoms before uppers).
    """
    terminals = [f"t{i:02d}" for i in range(48)]
    uppers = [f"u{i:02d}" for i in range(12)]
    bottoms = [f"w{i:02d}" for i in range(13)]
    one = Fraction(1)
    edges = []

    def leaf(star: int, slot: int) -> str:
        return terminals[4 * star + slot]

    for i, up in enumerate(uppers):
        for slot in range(4):
            edges.append((leaf(i, slot), up, one, one))
    for k in range(3):  # degree-4 bottoms cover leaf 0 of stars 4k..4k+3
        for star in range(4 * k, 4 * k + 4):
            edges.append((leaf(star, 0), bottoms[k], one, one))
    for k in range(4):  # degree-3 bottoms cover leaf 1 of stars 3k..3k+2
        for star in range(3 * k, 3 * k + 3):
            edges.append((leaf(star, 1), bottoms[3 + k], one, one))
    for k in range(6):  # degree-2 bottoms cover leaf 2 of stars 2k..2k+1
        for star in range(2 * k, 2 * k + 2):
            edges.append((leaf(star, 2), bottoms[7 + k], one, one))

    inst = Instance.from_data(terminals + uppers + bottoms, terminals, edges)
    return inst, tuple(bottoms + uppers)


# ---------------------------------------------------------------------------
# Family registry for the CLI and bench harness


@dataclass(frozen=True)
class FamilySpec:
    """Seedable family descriptor; equal specs yield byte-identical instances."""

    family: str
    seed: int

    def build(self) -> Instance:
        return generate(self.family, self.seed)


def _gen_minpower(seed: int) -> Instance:
    rng = random.Random(seed ^ 0x5EED)
    n = rng.randint(6, 10)
    return random_minpower(n, rng.randint(n, 2 * n), seed)


def _gen_setcover(theta: int):
    def gen(seed: int) -> Instance:
        return random_theta_setcover(seed, theta)

    return gen


def _gen_installation(seed: int) -> Instance:
    return random_installation(seed)


def _gen_uniform(seed: int) -> Instance:
    return random_uniform(seed, theta=5)


def _gen_uniform_unit(seed: int) -> Instance:
    return random_uniform(seed, theta=1, unit=True)


def _gen_unit(seed: int) -> Instance:
    rng = random.Random(seed ^ 0xDEED)
    n = rng.randint(8, 12)
    return random_unit(n, rng.randint(n, 2 * n), seed)


def _gen_general(seed: int) -> Instance:
    rng = random.Random(seed ^ 0xFEED)
    n = rng.randint(6, 10)
    return random_general(n, rng.randint(n, 2 * n), 3, seed)


def _gen_tight73(seed: int) -> Instance:
    return tight73()[0]


FAMILIES = {
    "minpower": _gen_minpower,
    "setcover-t2": _gen_setcover(2),
    "setcover-t5": _gen_setcover(5),
    "setcover-t10": _gen_setcover(10),
    "installation": _gen_installation,
    "uniform": _gen_uniform,
    "uniform-unit": _gen_uniform_unit,
    "unit": _gen_unit,
    "general": _gen_general,
    "tight73": _gen_tight73,
}


def generate(family: str, seed: int) -> Instance:
    try:
        gen = FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown family {family!r}; known: {sorted(FAMILIES)}") from None
    return gen(seed)
