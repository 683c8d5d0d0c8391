"""Unit-threshold solvers: residual set-cover reduction, the star-then-exact
solver, and the multi-phase solver with a pluggable k-set-cover subsolver.

With all thresholds 1, an optimal assignment is 0/1, pays 1 on every terminal,
and the non-terminal support must cover the terminals that no terminal-
terminal edge reaches.  Solving therefore reduces to unweighted set cover on
the residual bipartite instance, where the value offset |R| makes much better
ratios possible than for plain set cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

import networkx as nx

from .bounds import A1_RATIO, RHO
from .core import Assignment, Instance, covers, derive_costs
from .errors import Infeasible, NotUnitThresholds, SizeBoundViolated
from .fileio import instance_digest
from .report import SolveReport


@dataclass(frozen=True)
class SetCoverInstance:
    """Elements plus named sets; order of ``elements`` and insertion order of
    ``sets`` define the deterministic tie-breaking."""

    elements: tuple[str, ...]
    sets: Mapping[str, frozenset[str]]

    def element_rank(self) -> Mapping[str, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def max_set_size(self) -> int:
        return max((len(s) for s in self.sets.values()), default=0)

    def check_feasible(self) -> None:
        covered = set()
        for s in self.sets.values():
            covered |= s
        missing = [x for x in self.elements if x not in covered]
        if missing:
            raise Infeasible(f"elements with no covering set: {missing}")


@dataclass(frozen=True)
class SetCoverSolution:
    chosen: tuple[str, ...]
    covered: bool


@dataclass(frozen=True)
class UnitResidual:
    """Residual set-cover instance left after terminal-terminal edges pay off."""

    inst: Instance
    system: SetCoverInstance
    base_value: int
    precovered: tuple[str, ...]


def reduce_unit(inst: Instance) -> UnitResidual:
    """Strip terminals covered by terminal-terminal edges; the rest become
    set-cover elements with their non-terminal neighborhoods as sets."""
    if not inst.is_unit():
        raise NotUnitThresholds("not all thresholds equal 1")
    precovered = set()
    for e in inst.edges:
        if e.u in inst.terminals and e.v in inst.terminals:
            precovered.add(e.u)
            precovered.add(e.v)
    elements = tuple(u for u in inst.terminal_list if u not in precovered)
    element_set = set(elements)
    sets: dict[str, frozenset[str]] = {}
    for v in inst.nodes:
        if v in inst.terminals:
            continue
        neigh = {inst.edges[ei].other(v) for ei in inst.edges_at[v]} & element_set
        if neigh:
            sets[v] = frozenset(neigh)
    return UnitResidual(
        inst=inst,
        system=SetCoverInstance(elements=elements, sets=sets),
        base_value=len(inst.terminals),
        precovered=tuple(u for u in inst.terminal_list if u in precovered),
    )


def _restrict(sc: SetCoverInstance, remaining: set[str], removed_sets: set[str]) -> SetCoverInstance:
    sets = {}
    for v, s in sc.sets.items():
        if v in removed_sets:
            continue
        live = s & remaining
        if live:
            sets[v] = frozenset(live)
    return SetCoverInstance(
        elements=tuple(x for x in sc.elements if x in remaining), sets=sets
    )


# ---------------------------------------------------------------------------
# k-set-cover subsolvers


def exact_2setcover(sc: SetCoverInstance) -> SetCoverSolution:
    """Minimum cover when every set has at most 2 elements.

    The optimal size is |elements| - |M| for a maximum matching M of the
    element graph whose edges are the 2-element sets; matched pairs take their
    shared set, the rest take any incident set.
    """
    if sc.max_set_size() > 2:
        raise SizeBoundViolated("exact_2setcover needs sets of size <= 2")
    sc.check_feasible()
    rank = sc.element_rank()
    pair_owner: dict[tuple[str, str], str] = {}
    incident: dict[str, str] = {}
    graph = nx.Graph()
    graph.add_nodes_from(sc.elements)
    for v, s in sc.sets.items():
        members = sorted(s, key=rank.__getitem__)
        for x in members:
            incident.setdefault(x, v)
        if len(members) == 2:
            pair = (members[0], members[1])
            if pair not in pair_owner:
                pair_owner[pair] = v
                graph.add_edge(*pair)
    matching = nx.max_weight_matching(graph, maxcardinality=True)
    chosen: set[str] = set()
    matched: set[str] = set()
    for a, b in matching:
        x, y = sorted((a, b), key=rank.__getitem__)
        chosen.add(pair_owner[(x, y)])
        matched.update((x, y))
    for x in sc.elements:
        if x not in matched:
            chosen.add(incident[x])
    return SetCoverSolution(chosen=tuple(sorted(chosen)), covered=True)


def exact_bb(sc: SetCoverInstance, k: int) -> SetCoverSolution:
    """Optimal cover by element-branching search with a covered-mask memo and
    the ceil(remaining/k) admissible lower bound."""
    if sc.max_set_size() > k:
        raise SizeBoundViolated(f"set larger than k={k}")
    sc.check_feasible()
    n = len(sc.elements)
    rank = sc.element_rank()
    full = (1 << n) - 1
    set_masks: list[tuple[str, int]] = []
    for v, s in sc.sets.items():
        mask = 0
        for x in s:
            mask |= 1 << rank[x]
        set_masks.append((v, mask))
    by_element: list[list[tuple[str, int]]] = [[] for _ in range(n)]
    for v, mask in set_masks:
        for i in range(n):
            if mask >> i & 1:
                by_element[i].append((v, mask))

    memo: dict[int, tuple[int, tuple[str, ...]]] = {}

    def solve(mask: int) -> tuple[int, tuple[str, ...]]:
        if mask == full:
            return 0, ()
        hit = memo.get(mask)
        if hit is not None:
            return hit
        i = next(j for j in range(n) if not mask >> j & 1)
        best: Optional[tuple[int, tuple[str, ...]]] = None
        for v, smask in by_element[i]:
            new_mask = mask | smask
            if best is not None:
                remaining = n - bin(new_mask).count("1")
                if 1 + -(-remaining // k) >= best[0]:
                    continue
            count, picks = solve(new_mask)
            cand = (count + 1, (v,) + picks)
            if best is None or cand[0] < best[0]:
                best = cand
        assert best is not None
        memo[mask] = best
        return best

    _, picks = solve(0)
    return SetCoverSolution(chosen=tuple(sorted(picks)), covered=True)


def greedy_hk(sc: SetCoverInstance, k: int) -> SetCoverSolution:
    """Largest-set greedy; classical H_k quality on k-bounded systems."""
    if sc.max_set_size() > k:
        raise SizeBoundViolated(f"set larger than k={k}")
    sc.check_feasible()
    uncovered = set(sc.elements)
    order = list(sc.sets)
    chosen: list[str] = []
    while uncovered:
        best = max(
            ((len(sc.sets[v] & uncovered), -i, v) for i, v in enumerate(order)),
        )
        _, _, v = best
        gain = sc.sets[v] & uncovered
        assert gain, "feasibility was checked"
        chosen.append(v)
        uncovered -= gain
        order.remove(v)
    return SetCoverSolution(chosen=tuple(sorted(chosen)), covered=True)


def matching2(sc: SetCoverInstance, k: int = 2) -> SetCoverSolution:
    """Matching-based exact solver; valid only for k <= 2."""
    if k > 2:
        raise SizeBoundViolated("matching2 only handles k <= 2")
    return exact_2setcover(sc)


@dataclass(frozen=True)
class KSetCoverSolver:
    """Pluggable subsolver; ``certified`` means its quality is within the
    published k-set-cover table for every k <= 6, which is what the 1555/1347
    certificate of the multi-phase solver requires."""

    name: str
    fn: Callable[[SetCoverInstance, int], SetCoverSolution]
    certified: bool


EXACT_SUBSOLVER = KSetCoverSolver(name="exact", fn=exact_bb, certified=True)
GREEDY_SUBSOLVER = KSetCoverSolver(name="greedy", fn=greedy_hk, certified=False)

SUBSOLVERS = {s.name: s for s in (EXACT_SUBSOLVER, GREEDY_SUBSOLVER)}


# ---------------------------------------------------------------------------
# Unit solvers


def _unit_assignment(inst: Instance, chosen: tuple[str, ...]) -> Assignment:
    values = {u: Fraction(1) for u in inst.terminal_list}
    values.update({v: Fraction(1) for v in chosen})
    return Assignment.of(values)


def _unit_report(
    res: UnitResidual, algorithm: str, chosen: tuple[str, ...], bound, label: str, extras: dict
) -> SolveReport:
    inst = res.inst
    assignment = _unit_assignment(inst, chosen)
    ok, uncovered = covers(inst, assignment)
    assert ok, f"unit solver left terminals uncovered: {uncovered}"
    costs = derive_costs(inst)
    return SolveReport(
        instance_digest=instance_digest(inst),
        algorithm=algorithm,
        assignment=assignment,
        value=Fraction(res.base_value + len(chosen)),
        theta=costs.theta,
        delta=costs.delta,
        claimed_bound=bound,
        bound_label=label,
        extras=extras,
    )


def solve_unit_a1(res: UnitResidual) -> SolveReport:
    """Remove maximum stars while one has >= 3 elements, then finish exactly
    on the residual 2-bounded system."""
    sc = res.system
    sc.check_feasible()
    uncovered = set(sc.elements)
    removed: set[str] = set()
    chosen: list[str] = []
    while True:
        best = None
        for v in sc.sets:
            if v in removed:
                continue
            size = len(sc.sets[v] & uncovered)
            if size >= 3 and (best is None or size > best[0]):
                best = (size, v)
        if best is None:
            break
        _, v = best
        chosen.append(v)
        uncovered -= sc.sets[v]
        removed.add(v)
    residual = _restrict(sc, uncovered, removed)
    tail = exact_2setcover(residual) if residual.elements else SetCoverSolution((), True)
    all_chosen = tuple(chosen) + tail.chosen
    return _unit_report(
        res,
        "unit-a1",
        all_chosen,
        A1_RATIO,
        "1+67/360",
        {"greedy_stars": len(chosen), "exact_phase": len(tail.chosen)},
    )


def solve_unit_a2(
    res: UnitResidual, subsolver: KSetCoverSolver = EXACT_SUBSOLVER
) -> SolveReport:
    """Phase down star sizes, keeping the best of roots-so-far plus a
    subsolver finish at every k <= 6.

    At phase k a facility with k+1 still-uncovered neighbors claims all of
    them (the phase order guarantees no facility exceeds k+1), so residual
    instances stay feasible and roots are disjoint from later solutions.
    """
    sc = res.system
    if sc.elements:
        sc.check_feasible()
    uncovered = set(sc.elements)
    removed: set[str] = set()
    roots: list[str] = []
    candidates: list[tuple[int, int, int, int, tuple[str, ...]]] = []
    phases: list[dict] = []
    rank = sc.element_rank()
    delta = sc.max_set_size()
    for k in range(delta, -1, -1):
        stars: list[dict] = []
        for v in sc.sets:
            if v in removed:
                continue
            avail = sc.sets[v] & uncovered
            assert len(avail) <= k + 1, "phase invariant violated"
            if len(avail) == k + 1:
                roots.append(v)
                uncovered -= avail
                removed.add(v)
                stars.append(
                    {"root": v, "leaves": sorted(avail, key=rank.__getitem__)}
                )
        if stars:
            phases.append({"k": k, "stars": stars})
        if k > 6:
            continue
        if k == 0:
            assert not uncovered, "1-star phase must cover everything"
            finish: tuple[str, ...] = ()
        else:
            residual = _restrict(sc, uncovered, removed)
            if residual.elements:
                finish = subsolver.fn(residual, k).chosen
            else:
                finish = ()
        assert not (set(roots) & set(finish))
        candidates.append(
            (len(roots) + len(finish), k, len(roots), len(finish), tuple(roots) + finish)
        )
    if not sc.elements:
        candidates = [(0, 0, 0, 0, ())]
    # min() keeps the first (largest-k) candidate on size ties.
    size, k_winner, c_size, a_size, chosen = min(candidates, key=lambda cand: cand[0])
    bound = RHO if subsolver.certified else None
    label = "1555/1347" if subsolver.certified else f"uncertified ({subsolver.name})"
    report = _unit_report(
        res,
        "unit-a2",
        chosen,
        bound,
        label,
        {
            "k_winner": k_winner,
            "C_size": c_size,
            "A_size": a_size,
            "subsolver": subsolver.name,
        },
    )
    report.trace = {"phases": phases}
    return report
