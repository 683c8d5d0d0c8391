"""Instance model, derived costs, assignment algebra, and the levels reduction.

An instance is an undirected multigraph with per-endpoint edge thresholds and
a terminal set.  An assignment of values to nodes activates every edge whose
two endpoint thresholds are met; a feasible assignment activates an edge at
every terminal.  All numeric data is kept as exact ``fractions.Fraction`` so
that density comparisons and reported ratios are tie-stable and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import EmptyLevels, InvalidInstance, IsolatedTerminal

ZERO = Fraction(0)
ONE = Fraction(1)

Rational = Union[int, str, Fraction]


def as_fraction(x: Rational) -> Fraction:
    """Parse a threshold or value exactly ("3/2", "0.25", 2, Fraction)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise InvalidInstance(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class Edge:
    """A uv-edge with threshold ``tu`` at ``u`` and ``tv`` at ``v``."""

    u: str
    v: str
    tu: Fraction
    tv: Fraction

    def threshold_at(self, node: str) -> Fraction:
        if node == self.u:
            return self.tu
        if node == self.v:
            return self.tv
        raise KeyError(node)

    def other(self, node: str) -> str:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise KeyError(node)

    def value(self) -> Fraction:
        return self.tu + self.tv


@dataclass(frozen=True)
class Instance:
    """Immutable multigraph instance; build via :meth:`from_data`.

    Edges are stored in canonical form: oriented so that ``u`` precedes ``v``
    in node order, sorted by ``(u, v, tu, tv)``, with parallel edges dominated
    by another parallel edge (both thresholds >=) pruned.  Pruning never
    changes an optimum or a greedy choice.
    """

    nodes: tuple[str, ...]
    terminals: frozenset[str]
    edges: tuple[Edge, ...]

    @classmethod
    def from_data(
        cls,
        nodes: Iterable[str],
        terminals: Iterable[str],
        edges: Iterable[tuple[str, str, Rational, Rational]],
    ) -> "Instance":
        node_list = list(nodes)
        if len(set(node_list)) != len(node_list):
            raise InvalidInstance("duplicate node ids")
        idx = {n: i for i, n in enumerate(node_list)}
        term_set = frozenset(terminals)
        for t in term_set:
            if t not in idx:
                raise InvalidInstance(f"terminal {t!r} is not a node")
        canon = []
        for u, v, tu, tv in edges:
            if u not in idx or v not in idx:
                raise InvalidInstance(f"edge endpoint not a node: {u!r}-{v!r}")
            if u == v:
                raise InvalidInstance(f"self loop at {u!r}")
            ftu, ftv = as_fraction(tu), as_fraction(tv)
            if ftu < 0 or ftv < 0:
                raise InvalidInstance(f"negative threshold on edge {u!r}-{v!r}")
            if idx[u] > idx[v]:
                u, v, ftu, ftv = v, u, ftv, ftu
            canon.append(Edge(u, v, ftu, ftv))
        canon.sort(key=lambda e: (idx[e.u], idx[e.v], e.tu, e.tv))
        kept = _prune_dominated(canon)
        return cls(tuple(node_list), term_set, tuple(kept))

    @cached_property
    def index(self) -> Mapping[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def edges_at(self) -> Mapping[str, tuple[int, ...]]:
        at: dict[str, list[int]] = {n: [] for n in self.nodes}
        for i, e in enumerate(self.edges):
            at[e.u].append(i)
            at[e.v].append(i)
        return {n: tuple(ids) for n, ids in at.items()}

    @cached_property
    def terminal_list(self) -> tuple[str, ...]:
        return tuple(sorted(self.terminals, key=self.index.__getitem__))

    @cached_property
    def terminals_independent(self) -> bool:
        return not any(e.u in self.terminals and e.v in self.terminals for e in self.edges)

    def is_unit(self) -> bool:
        return all(e.tu == 1 and e.tv == 1 for e in self.edges)


def _prune_dominated(sorted_edges: list[Edge]) -> list[Edge]:
    # Drop e when an earlier parallel edge has both thresholds <= e's.
    kept: list[Edge] = []
    for e in sorted_edges:
        dominated = any(
            k.u == e.u and k.v == e.v and k.tu <= e.tu and k.tv <= e.tv for k in kept
        )
        if not dominated:
            kept.append(e)
    return kept


@dataclass(frozen=True)
class Assignment:
    """Node values, defaulting to zero; zero entries are not stored."""

    values: Mapping[str, Fraction]

    @classmethod
    def of(cls, mapping: Mapping[str, Rational]) -> "Assignment":
        vals = {}
        for node, x in mapping.items():
            f = as_fraction(x)
            if f < 0:
                raise InvalidInstance(f"negative assignment at {node!r}")
            if f != 0:
                vals[node] = f
        return cls(vals)

    @classmethod
    def zero(cls) -> "Assignment":
        return cls({})

    def get(self, node: str) -> Fraction:
        return self.values.get(node, ZERO)

    def total(self) -> Fraction:
        return sum(self.values.values(), ZERO)

    def __add__(self, other: "Assignment") -> "Assignment":
        vals = dict(self.values)
        for node, x in other.values.items():
            vals[node] = vals.get(node, ZERO) + x
        return Assignment(vals)

    def leq(self, other: "Assignment") -> bool:
        return all(x <= other.get(node) for node, x in self.values.items())

    def support(self) -> frozenset[str]:
        return frozenset(self.values)


def activated_edges(inst: Instance, a: Assignment) -> tuple[int, ...]:
    """Indices of edges whose both endpoint thresholds are met by ``a``."""
    return activated_edge_ids(inst, a.values)


def activated_edge_ids(inst: Instance, values: Mapping[str, Fraction]) -> tuple[int, ...]:
    get = values.get
    return tuple(
        i
        for i, e in enumerate(inst.edges)
        if get(e.u, ZERO) >= e.tu and get(e.v, ZERO) >= e.tv
    )


def covered_terminals(inst: Instance, values: Mapping[str, Fraction]) -> frozenset[str]:
    get = values.get
    covered = set()
    for e in inst.edges:
        if get(e.u, ZERO) >= e.tu and get(e.v, ZERO) >= e.tv:
            if e.u in inst.terminals:
                covered.add(e.u)
            if e.v in inst.terminals:
                covered.add(e.v)
    return frozenset(covered)


def covers(inst: Instance, a: Assignment) -> tuple[bool, tuple[str, ...]]:
    """Whether every terminal touches an activated edge, plus the uncovered list."""
    covered = covered_terminals(inst, a.values)
    uncovered = tuple(t for t in inst.terminal_list if t not in covered)
    return (not uncovered, uncovered)


@dataclass(frozen=True)
class DerivedCosts:
    """Per-terminal covering costs and instance-wide aggregates.

    ``q[u]`` is the smallest threshold at ``u`` over its incident edges;
    ``q[u] + c[u]`` is the smallest total value of an edge covering ``u``.
    ``theta`` is the slope ``max c/q`` (``math.inf`` when some terminal has
    ``q = 0 < c``); ``delta`` is the largest number of terminal neighbors of
    any node.  ``cheapest`` maps each terminal to a minimum-value edge index.
    """

    q: Mapping[str, Fraction]
    c: Mapping[str, Fraction]
    Q: Fraction
    C: Fraction
    theta: Union[Fraction, float]
    delta: int
    cheapest: Mapping[str, int]

    def theta_finite(self) -> bool:
        return self.theta != math.inf


def derive_costs(inst: Instance) -> DerivedCosts:
    """Compute q, c, Q, C, slope and degree bound; raises IsolatedTerminal."""
    q: dict[str, Fraction] = {}
    c: dict[str, Fraction] = {}
    cheapest: dict[str, int] = {}
    for u in inst.terminal_list:
        ids = inst.edges_at[u]
        if not ids:
            raise IsolatedTerminal(u)
        q[u] = min(inst.edges[i].threshold_at(u) for i in ids)
        best = min(ids, key=lambda i: (inst.edges[i].value(), i))
        c[u] = inst.edges[best].value() - q[u]
        cheapest[u] = best

    theta: Union[Fraction, float] = ZERO
    for u in inst.terminal_list:
        if q[u] > 0:
            ratio = c[u] / q[u]
            if theta != math.inf and ratio > theta:
                theta = ratio
        elif c[u] > 0:
            # q = 0 < c leaves the slope unbounded.
            theta = math.inf
        # q = c = 0 imposes no constraint.

    delta = 0
    for v in inst.nodes:
        neigh = {inst.edges[i].other(v) for i in inst.edges_at[v]}
        delta = max(delta, len(neigh & inst.terminals))

    return DerivedCosts(
        q=q,
        c=c,
        Q=sum(q.values(), ZERO),
        C=sum(c.values(), ZERO),
        theta=theta,
        delta=delta,
        cheapest=cheapest,
    )


# ---------------------------------------------------------------------------
# Activation specs and the levels reduction


@dataclass(frozen=True)
class TableActivation:
    """Explicit monotone 0/1 table over the level grid of an edge's endpoints."""

    table: Mapping[tuple[Fraction, Fraction], bool]

    def activates(self, au: Fraction, av: Fraction) -> bool:
        return bool(self.table.get((au, av), False))


@dataclass(frozen=True)
class InstallationActivation:
    """Edge opens when the scaled endpoint values reach the demand.

    Activation at values (au, av) means ``coef_u*au + coef_v*av >= demand``.
    """

    demand: Fraction
    coef_u: Fraction
    coef_v: Fraction

    def activates(self, au: Fraction, av: Fraction) -> bool:
        return self.coef_u * au + self.coef_v * av >= self.demand


ActivationRule = Union[TableActivation, InstallationActivation]


@dataclass(frozen=True)
class SpecEdge:
    u: str
    v: str
    rule: ActivationRule


@dataclass(frozen=True)
class ActivationSpec:
    """Nodes with finite level lists and per-pair monotone activation rules."""

    nodes: tuple[str, ...]
    levels: Mapping[str, tuple[Fraction, ...]]
    edges: tuple[SpecEdge, ...]


def _check_monotone(rule: TableActivation, lu: tuple[Fraction, ...], lv: tuple[Fraction, ...]) -> None:
    for i, a in enumerate(lu):
        for j, b in enumerate(lv):
            if not rule.activates(a, b):
                continue
            for a2 in lu[i:]:
                for b2 in lv[j:]:
                    if not rule.activates(a2, b2):
                        raise InvalidInstance(
                            f"activation table not monotone at ({a},{b}) vs ({a2},{b2})"
                        )


def levels_reduction(spec: ActivationSpec, terminals: Iterable[str]) -> Instance:
    """Expand monotone activation rules into parallel threshold edges.

    Each spec edge contributes one uv-edge per Pareto-minimal activating level
    pair; dominated pairs are pruned.  The reduced instance has the same
    optimal value as the activation formulation restricted to the level sets.
    """
    idx = {n: i for i, n in enumerate(spec.nodes)}
    edges: list[tuple[str, str, Fraction, Fraction]] = []
    for se in spec.edges:
        for node in (se.u, se.v):
            if node not in idx:
                raise InvalidInstance(f"spec edge endpoint {node!r} is not a node")
            if not spec.levels.get(node):
                raise EmptyLevels(node)
        lu = tuple(sorted(spec.levels[se.u]))
        lv = tuple(sorted(spec.levels[se.v]))
        if isinstance(se.rule, TableActivation):
            _check_monotone(se.rule, lu, lv)
        active = [(a, b) for a in lu for b in lv if se.rule.activates(a, b)]
        minimal = [
            (a, b)
            for (a, b) in active
            if not any((a2, b2) != (a, b) and a2 <= a and b2 <= b for (a2, b2) in active)
        ]
        for a, b in minimal:
            edges.append((se.u, se.v, a, b))
    return Instance.from_data(spec.nodes, terminals, edges)


def q_assignment(costs: DerivedCosts) -> Assignment:
    """The assignment putting q on every terminal (zero elsewhere)."""
    return Assignment.of(dict(costs.q))


def cheapest_edge_cover(inst: Instance, costs: DerivedCosts) -> Assignment:
    """Feasible cover of value <= Q + C: per terminal, its minimum-value edge."""
    values: dict[str, Fraction] = dict(costs.q)
    for u in inst.terminal_list:
        e = inst.edges[costs.cheapest[u]]
        for node in (e.u, e.v):
            t = e.threshold_at(node)
            if values.get(node, ZERO) < t:
                values[node] = t
    return Assignment.of(values)


def uncovered_cost(inst: Instance, costs: DerivedCosts, covered: frozenset[str]) -> Fraction:
    return sum((costs.c[u] for u in inst.terminal_list if u not in covered), ZERO)
