"""Average-price greedy for bipartite instances with locally uniform thresholds.

Every facility carries one weight (its own side of each incident edge) and one
service threshold (the client side).  The greedy repeatedly opens the facility
with the cheapest average price per newly covered client, taking all of its
uncovered neighbors; with uniform per-client prices a partial star is never
better.  Tie-breaking is a run parameter; the adversarial mode exists to
reproduce the worst-case example bundled with the generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .bounds import omega_bar
from .core import Assignment, Instance, ZERO, derive_costs
from .errors import Infeasible, NonUniformFacility, NotBipartite
from .fileio import instance_digest
from .report import SolveReport

TieBreak = str  # "lowest-id" or "adversarial-order"


@dataclass(frozen=True)
class UniformBipartiteInstance:
    """Validated bipartite view: clients (terminals) vs weighted facilities."""

    inst: Instance
    clients: tuple[str, ...]
    facilities: tuple[str, ...]
    weight: Mapping[str, Fraction]
    service: Mapping[str, Fraction]
    adjacency: Mapping[str, tuple[str, ...]]
    theta: Union[Fraction, float]
    delta: int


def validate_locally_uniform(inst: Instance) -> UniformBipartiteInstance:
    """Check bipartiteness and per-facility threshold uniformity.

    The reported slope is the facility-based one, max weight/service, which is
    the quantity the average-price guarantee depends on.
    """
    for e in inst.edges:
        u_term = e.u in inst.terminals
        v_term = e.v in inst.terminals
        if u_term == v_term:
            raise NotBipartite(f"edge {e.u!r}-{e.v!r} stays on one side")

    clients = inst.terminal_list
    facilities = tuple(n for n in inst.nodes if n not in inst.terminals)
    weight: dict[str, Fraction] = {}
    service: dict[str, Fraction] = {}
    adjacency: dict[str, list[str]] = {v: [] for v in facilities}
    for e in inst.edges:
        fac, cli = (e.u, e.v) if e.u not in inst.terminals else (e.v, e.u)
        w, t = e.threshold_at(fac), e.threshold_at(cli)
        if fac in weight and (weight[fac], service[fac]) != (w, t):
            raise NonUniformFacility(fac)
        weight[fac], service[fac] = w, t
        adjacency[fac].append(cli)

    theta: Union[Fraction, float] = ZERO
    delta = 0
    for v in facilities:
        neighbors = sorted(set(adjacency[v]), key=inst.index.__getitem__)
        adjacency[v] = neighbors
        delta = max(delta, len(neighbors))
        if not neighbors:
            continue
        w, t = weight[v], service[v]
        if t > 0:
            if theta != math.inf:
                theta = max(theta, w / t)
        elif w > 0:
            theta = math.inf
    return UniformBipartiteInstance(
        inst=inst,
        clients=clients,
        facilities=facilities,
        weight=dict(weight),
        service=dict(service),
        adjacency={v: tuple(c) for v, c in adjacency.items()},
        theta=theta,
        delta=delta,
    )


def uniform_bound(ubi: UniformBipartiteInstance) -> tuple[str, Union[Fraction, float]]:
    if ubi.delta == 0 or ubi.theta == 0:
        return ("value=Q (free facilities)", Fraction(1))
    return ("1+omega_bar(theta)", 1 + omega_bar(ubi.theta, delta_cap=ubi.delta))


def solve_locally_uniform(
    ubi: UniformBipartiteInstance,
    tie_break: TieBreak = "lowest-id",
    priority: Optional[Sequence[str]] = None,
) -> SolveReport:
    """Greedy by average price w/k + t over facilities with uncovered clients.

    ``tie_break`` picks among equal prices: "lowest-id" by node order,
    "adversarial-order" by an explicit facility priority list.
    """
    inst = ubi.inst
    if tie_break == "adversarial-order":
        if priority is None:
            raise ValueError("adversarial-order tie-breaking needs a priority list")
        rank = {v: i for i, v in enumerate(priority)}
        offset = len(rank)
        tie_key = {v: (rank.get(v, offset), inst.index[v]) for v in ubi.facilities}
    elif tie_break == "lowest-id":
        tie_key = {v: (0, inst.index[v]) for v in ubi.facilities}
    else:
        raise ValueError(f"unknown tie break {tie_break!r}")

    uncovered = set(ubi.clients)
    values: dict[str, Fraction] = {}
    steps: list[dict] = []
    while uncovered:
        best = None
        for v in ubi.facilities:
            if v in values:
                continue
            k = sum(1 for c in ubi.adjacency[v] if c in uncovered)
            if k == 0:
                continue
            price = ubi.weight[v] / k + ubi.service[v]
            key = (price, tie_key[v])
            if best is None or key < best[0]:
                best = (key, v, k, price)
        if best is None:
            stuck = sorted(uncovered, key=inst.index.__getitem__)
            raise Infeasible(f"clients without an open facility: {stuck}")
        _, v, k, price = best
        served = tuple(c for c in ubi.adjacency[v] if c in uncovered)
        values[v] = ubi.weight[v]
        for c in served:
            values[c] = ubi.service[v]
        uncovered -= set(served)
        steps.append(
            {
                "facility": v,
                "clients": list(served),
                "k": k,
                "price": str(price),
            }
        )

    assignment = Assignment.of(values)
    label, bound = uniform_bound(ubi)
    costs = derive_costs(inst)
    return SolveReport(
        instance_digest=instance_digest(inst),
        algorithm="locally-uniform",
        assignment=assignment,
        value=assignment.total(),
        theta=ubi.theta,
        delta=ubi.delta,
        claimed_bound=bound,
        bound_label=label,
        trace={"steps": steps},
        extras={
            "tie_break": tie_break,
            "instance_slope": "inf" if costs.theta == math.inf else str(costs.theta),
        },
    )
