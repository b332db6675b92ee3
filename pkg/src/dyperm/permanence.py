"""Vertex, community and graph permanence.

A vertex ``v`` with degree ``d``, ``I`` neighbors in its own community,
at most ``E_max`` neighbors in any single other community, and internal
clustering ``c_in`` scores::

    perm(v) = I / (E_max * d) - (1 - c_in)

with two degenerate cases: ``E_max == 0`` gives ``I / d`` and an isolated
vertex scores 0. ``c_in`` is the edge density among the internal neighbors
and is taken as 0 when there are fewer than two of them.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .errors import EmptyGraph, MissingCommunity, MissingNode
from .graph import Graph, Partition

EPS = 1e-12


@dataclass(frozen=True)
class VertexPermanenceBreakdown:
    internal_degree: int
    degree: int
    e_max: int
    e_neig: int
    c_in: float
    perm: float

    def as_row(self, node: int) -> str:
        return (
            f"{node}\t{self.internal_degree}\t{self.degree}\t{self.e_max}"
            f"\t{self.c_in:.6f}\t{self.perm:.6f}"
        )


@dataclass(frozen=True)
class PermanenceReport:
    per_vertex: dict[int, VertexPermanenceBreakdown]
    graph_perm: float

    def tsv(self) -> str:
        lines = ["node\tI\td\te_max\tc_in\tperm"]
        lines += [self.per_vertex[u].as_row(u) for u in sorted(self.per_vertex)]
        return "\n".join(lines) + "\n"


def permanence_value(internal: int, degree: int, e_max: int, e_neig: int) -> float:
    """Combine the integer counts into a permanence score."""
    if degree == 0:
        return 0.0
    if e_max == 0:
        return internal / degree
    if internal >= 2:
        c_in = e_neig / (internal * (internal - 1) / 2)
    else:
        c_in = 0.0
    return internal / (e_max * degree) - (1.0 - c_in)


def _counts(adj: Mapping[int, set], labels: Mapping[int, int], u: int, c: int):
    nbrs = adj[u]
    tally = Counter(labels[w] for w in nbrs)
    internal = tally.pop(c, 0)
    e_max = max(tally.values(), default=0)
    e_neig = 0
    if internal >= 2:
        inside = {w for w in nbrs if labels[w] == c}
        e_neig = sum(len(adj[w] & inside) for w in inside) // 2
    return internal, len(nbrs), e_max, e_neig


def perm_in(adj: Mapping[int, set], labels: Mapping[int, int], u: int, c: int) -> float:
    """Permanence ``u`` would have as a member of community ``c``.

    Only neighbor labels enter the computation, so ``u``'s own current
    label is irrelevant and nothing needs to be mutated.
    """
    return permanence_value(*_counts(adj, labels, u, c))


def vertex_perm(adj: Mapping[int, set], labels: Mapping[int, int], u: int) -> float:
    return permanence_value(*_counts(adj, labels, u, labels[u]))


def _check(g: Graph, p: Partition, u: int) -> None:
    if u not in g.adj:
        raise MissingNode(f"node {u} not in graph")
    if u not in p.assignment:
        raise MissingNode(f"node {u} has no community")


def vertex_breakdown(g: Graph, p: Partition, u: int) -> VertexPermanenceBreakdown:
    _check(g, p, u)
    internal, degree, emax, e_neig = _counts(g.adj, p.assignment, u, p.assignment[u])
    c_in = e_neig / (internal * (internal - 1) / 2) if internal >= 2 else 0.0
    return VertexPermanenceBreakdown(
        internal, degree, emax, e_neig, c_in, permanence_value(internal, degree, emax, e_neig)
    )


def e_max(g: Graph, p: Partition, u: int) -> int:
    """Largest number of ``u``'s neighbors sitting in one foreign community."""
    _check(g, p, u)
    return _counts(g.adj, p.assignment, u, p.assignment[u])[2]


def community_perm_sum(g: Graph, p: Partition, c: int) -> float:
    if c not in p.members:
        raise MissingCommunity(f"community {c} does not exist")
    return math.fsum(vertex_perm(g.adj, p.assignment, u) for u in p.members[c])


def graph_perm(g: Graph, p: Partition) -> PermanenceReport:
    if len(g) == 0:
        raise EmptyGraph("permanence of an empty graph is undefined")
    per_vertex = {u: vertex_breakdown(g, p, u) for u in g.nodes()}
    total = math.fsum(b.perm for b in per_vertex.values())
    return PermanenceReport(per_vertex, total / len(per_vertex))
