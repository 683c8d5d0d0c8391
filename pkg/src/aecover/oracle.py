"""Exact optimum for small instances, by branch and bound over per-terminal
covering-edge choices in exact rational arithmetic.

Any minimal feasible assignment is the pointwise threshold maximum of one
covering edge chosen per terminal, so searching edge choices is complete.
The search is the ground truth behind every empirical ratio certificate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .core import (
    Assignment,
    Instance,
    ZERO,
    activated_edge_ids,
    cheapest_edge_cover,
    derive_costs,
)
from .errors import BudgetExceeded, LimitExceeded

DEFAULT_MAX_TERMINALS = 10
DEFAULT_MAX_NODES = 64


@dataclass
class ExactResult:
    value: Fraction
    assignment: Assignment
    choice: Mapping[str, int]
    nodes_expanded: int
    optimal: bool = True


def exact_solve(
    inst: Instance,
    *,
    max_terminals: int = DEFAULT_MAX_TERMINALS,
    max_nodes: int = DEFAULT_MAX_NODES,
    time_budget: Optional[float] = None,
) -> ExactResult:
    """Globally optimal assignment covering all terminals.

    Branches on terminals in order of fewest incident edges; a branch raises
    both endpoints of a chosen edge to its thresholds.  Prunes on the partial
    value plus the residual q lower bound against the incumbent, which starts
    at the per-terminal cheapest-edge cover.  Raises LimitExceeded for
    instances beyond the configured limits and BudgetExceeded (carrying the
    non-optimal incumbent) when the time budget runs out.
    """
    if len(inst.terminals) > max_terminals:
        raise LimitExceeded(
            f"{len(inst.terminals)} terminals exceed the limit {max_terminals}"
        )
    if len(inst.nodes) > max_nodes:
        raise LimitExceeded(f"{len(inst.nodes)} nodes exceed the limit {max_nodes}")

    costs = derive_costs(inst)
    incumbent = cheapest_edge_cover(inst, costs)
    best_value = incumbent.total()
    best_values = dict(incumbent.values)
    best_choice: dict[str, int] = dict(costs.cheapest)

    terms = sorted(inst.terminal_list, key=lambda u: (len(inst.edges_at[u]), inst.index[u]))
    values: dict[str, Fraction] = {n: ZERO for n in inst.nodes}
    choice: dict[str, int] = {}
    counters = {"expanded": 0}
    deadline = None if time_budget is None else time.monotonic() + time_budget

    # Residual lower bound: every remaining terminal still needs at least q at
    # itself; suffixes are recomputed incrementally from the current values.
    def residual_need(i: int) -> Fraction:
        need = ZERO
        for u in terms[i:]:
            gap = costs.q[u] - values[u]
            if gap > 0:
                need += gap
        return need

    def is_covered(u: str) -> bool:
        for ei in inst.edges_at[u]:
            e = inst.edges[ei]
            if values[e.u] >= e.tu and values[e.v] >= e.tv:
                return True
        return False

    def search(i: int, total: Fraction) -> None:
        nonlocal best_value, best_values, best_choice
        counters["expanded"] += 1
        if deadline is not None:
            if time.monotonic() > deadline:
                raise BudgetExceeded(
                    ExactResult(
                        value=best_value,
                        assignment=Assignment.of(best_values),
                        choice=dict(best_choice),
                        nodes_expanded=counters["expanded"],
                        optimal=False,
                    )
                )
        if total + residual_need(i) >= best_value:
            return
        if i == len(terms):
            best_value = total
            best_values = {n: x for n, x in values.items() if x > 0}
            best_choice = dict(choice)
            return
        u = terms[i]
        if is_covered(u):
            search(i + 1, total)
            return
        options = []
        for ei in inst.edges_at[u]:
            e = inst.edges[ei]
            inc = max(ZERO, e.tu - values[e.u]) + max(ZERO, e.tv - values[e.v])
            options.append((inc, ei))
        options.sort()
        for _, ei in options:
            e = inst.edges[ei]
            old_u, old_v = values[e.u], values[e.v]
            values[e.u] = max(old_u, e.tu)
            values[e.v] = max(old_v, e.tv)
            choice[u] = ei
            search(i + 1, total + (values[e.u] - old_u) + (values[e.v] - old_v))
            del choice[u]
            values[e.u], values[e.v] = old_u, old_v

    search(0, ZERO)
    return ExactResult(
        value=best_value,
        assignment=Assignment.of(best_values),
        choice=best_choice,
        nodes_expanded=counters["expanded"],
        optimal=True,
    )


@dataclass(frozen=True)
class Star:
    root: str
    leaves: tuple[str, ...]
    edge_ids: tuple[int, ...]


def exact_star_decomposition(inst: Instance, assignment: Assignment) -> list[Star]:
    """Node-disjoint rooted stars with terminal leaves covering all terminals.

    Extracts an inclusion-minimal activated cover, whose components are stars
    (each edge of a minimal cover covers a private terminal).
    """
    active = list(activated_edge_ids(inst, assignment.values))
    count = {t: 0 for t in inst.terminals}
    for ei in active:
        e = inst.edges[ei]
        for node in (e.u, e.v):
            if node in count:
                count[node] += 1
    kept = []
    for ei in active:
        e = inst.edges[ei]
        ends = [n for n in (e.u, e.v) if n in count]
        if ends and all(count[n] > 1 for n in ends):
            for n in ends:
                count[n] -= 1
        elif ends:
            kept.append(ei)
        # Edges touching no terminal are always dropped.

    adj: dict[str, list[int]] = {}
    for ei in kept:
        e = inst.edges[ei]
        adj.setdefault(e.u, []).append(ei)
        adj.setdefault(e.v, []).append(ei)

    seen: set[str] = set()
    stars: list[Star] = []
    for start in sorted(adj, key=inst.index.__getitem__):
        if start in seen:
            continue
        component, comp_edges = {start}, set()
        stack = [start]
        while stack:
            node = stack.pop()
            for ei in adj[node]:
                comp_edges.add(ei)
                other = inst.edges[ei].other(node)
                if other not in component:
                    component.add(other)
                    stack.append(other)
        seen |= component
        centers = [n for n in component if len(adj[n]) >= 2]
        assert len(centers) <= 1, "minimal cover component is not a star"
        if centers:
            root = centers[0]
        else:
            (e,) = (inst.edges[ei] for ei in comp_edges)
            non_terminals = [n for n in (e.u, e.v) if n not in inst.terminals]
            root = non_terminals[0] if len(non_terminals) == 1 else min(
                (e.u, e.v), key=inst.index.__getitem__
            )
        leaves = tuple(sorted(component - {root}, key=inst.index.__getitem__))
        assert all(leaf in inst.terminals for leaf in leaves)
        stars.append(Star(root=root, leaves=leaves, edge_ids=tuple(sorted(comp_edges))))
    stars.sort(key=lambda s: inst.index[s.root])
    return stars
