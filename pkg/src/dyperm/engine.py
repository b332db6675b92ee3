"""Incremental permanence maximization over a stream of atomic events.

The engine owns one (Graph, Partition) pair and a per-vertex permanence
cache. Each event touches the graph, refreshes the cache for the vertices
whose counts can have changed, then runs the local search prescribed for
that event kind:

* node addition: singleton community, then its edges one at a time;
* node deletion: its edges removed one at a time, then the node;
* edge addition: nothing for an intra-community edge, otherwise a pair of
  breadth-first move proposals (u towards v's community and v towards u's),
  the better one kept if it strictly raises the two communities' summed
  permanence;
* edge deletion: degree-0 endpoints become singletons, inter-community
  deletions leave the partition alone, and an intra-community deletion
  that disconnects u from v inside their community splits it in two.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import AuditFailure, DyPermError, MissingCommunity, MissingNode
from .graph import (
    NEW_EDGE,
    NEW_NODE,
    REMOVE_EDGE,
    REMOVE_NODE,
    AtomicEvent,
    Graph,
    Partition,
)
from .permanence import EPS, graph_perm, perm_in, vertex_perm

log = logging.getLogger(__name__)

AUDIT_TOL = 1e-9


@dataclass
class MoveProposal:
    source: int
    target: int
    moved_nodes: list[tuple[int, int, int]]
    perm_before: float
    perm_after: float
    groups: frozenset = frozenset()
    # engine bookkeeping needed to roll back to a bit-identical state
    _total: float = 0.0
    _next_id: int = 0

    @property
    def gain(self) -> float:
        return self.perm_after - self.perm_before


@dataclass
class ChangeSummary:
    """What one event did. ``case`` names the handler branch taken, e.g.
    ``"inter-edge-added"`` or ``"intra-edge-removed"``."""

    case: str
    moved: list[tuple[int, int, int]] = field(default_factory=list)
    created: list[int] = field(default_factory=list)
    removed: list[int] = field(default_factory=list)

    def merge(self, other: ChangeSummary) -> None:
        self.moved.extend(other.moved)
        self.created.extend(other.created)
        self.removed.extend(other.removed)


class DyPermEngine:
    """Sequential, single-writer maintainer of a permanence-maximizing partition.

    Args:
        graph: initial snapshot. Taken over, not copied.
        partition: base community structure covering every node of ``graph``.
            Labels are remapped to a dense 0..k-1 range.
        audit: re-check the maintained aggregate against a from-scratch
            recomputation after every event (slow).
    """

    def __init__(self, graph: Graph, partition: Partition, audit: bool = False):
        if set(partition.assignment) != set(graph.adj):
            raise MissingNode("base partition must cover exactly the graph's nodes")
        self.graph = graph
        self.partition = Partition.from_labels(partition.assignment)
        self.audit = audit
        self.stats: Counter = Counter()
        self._perm: dict[int, float] = {}
        for u in graph.adj:
            self._perm[u] = vertex_perm(graph.adj, self.partition.assignment, u)
        self._total = math.fsum(self._perm.values())

    # -- aggregate views ---------------------------------------------------

    @property
    def fresh_community_counter(self) -> int:
        return self.partition.next_id

    @property
    def total_perm(self) -> float:
        return self._total

    @property
    def graph_perm(self) -> float:
        """Maintained average permanence (0.0 for an empty graph)."""
        n = len(self.graph)
        return self._total / n if n else 0.0

    def perm(self, u: int) -> float:
        return self._perm[u]

    def community_perm_sum(self, c: int) -> float:
        if c not in self.partition.members:
            raise MissingCommunity(f"community {c} does not exist")
        return math.fsum(self._perm[u] for u in self.partition.members[c])

    def check_consistency(self, tol: float = AUDIT_TOL) -> float:
        """Compare the maintained aggregate with a from-scratch evaluation.

        Returns the absolute discrepancy; raises AuditFailure beyond ``tol``.
        """
        self.graph.audit()
        self.partition.audit(self.graph.adj)
        if not len(self.graph):
            return 0.0
        fresh = graph_perm(self.graph, self.partition).graph_perm
        diff = abs(fresh - self.graph_perm)
        if diff > tol:
            raise AuditFailure(
                f"maintained graph_perm {self.graph_perm!r} != recomputed {fresh!r} (|diff|={diff:.3g})"
            )
        return diff

    # -- cache maintenance -------------------------------------------------

    def _refresh(self, nodes: Iterable[int]) -> None:
        adj, labels, cache = self.graph.adj, self.partition.assignment, self._perm
        for w in nodes:
            new = vertex_perm(adj, labels, w)
            self._total += new - cache[w]
            cache[w] = new

    def _move(self, u: int, c: int, journal: list | None = None) -> None:
        old = self.partition.move_node(u, c)
        if old == c:
            return
        if journal is not None:
            journal.append((u, old, c))
        self._refresh([u, *self.graph.adj[u]])

    def _pair_sum(self, a: int, b: int) -> float:
        members, cache = self.partition.members, self._perm
        vals = [cache[w] for w in members.get(a, ())]
        vals += [cache[w] for w in members.get(b, ())]
        return math.fsum(vals)

    def _rollback(self, proposal: MoveProposal) -> None:
        for u, frm, _ in reversed(proposal.moved_nodes):
            self._move(u, frm)
        self._total = proposal._total
        self.partition._next_id = proposal._next_id

    def _groups(self, a: int, b: int) -> frozenset:
        members = self.partition.members
        return frozenset(frozenset(members[c]) for c in (a, b) if c in members)

    # -- event dispatch ----------------------------------------------------

    def apply_event(self, e: AtomicEvent) -> ChangeSummary:
        try:
            if e.kind == NEW_NODE:
                summary = self.handle_node_addition(e.u)
            elif e.kind == REMOVE_NODE:
                summary = self.handle_node_deletion(e.u)
            elif e.kind == NEW_EDGE:
                summary = self.handle_edge_addition(e.u, e.v)
            else:
                summary = self.handle_edge_deletion(e.u, e.v)
        except DyPermError as err:
            if e.line is not None and not isinstance(err, AuditFailure):
                raise type(err)(f"event line {e.line} ({e.format()}): {err}") from err
            raise
        self.stats["events"] += 1
        if self.audit:
            try:
                self.check_consistency()
            except AuditFailure as err:
                raise AuditFailure(f"after event {e.format()}: {err}") from err
        return summary

    def apply_events(self, events: Iterable[AtomicEvent]) -> None:
        for e in events:
            self.apply_event(e)

    def _summarize(self, case: str, moved, start_next: int, touched: Iterable[int]) -> ChangeSummary:
        members = self.partition.members
        touched = set(touched) | {frm for _, frm, _ in moved} | {to for _, _, to in moved}
        created = sorted(c for c in touched if c >= start_next and c in members)
        removed = sorted(c for c in touched if c < start_next and c not in members)
        self.stats["moves"] += len(moved)
        self.stats["communities_created"] += len(created)
        return ChangeSummary(case, list(moved), created, removed)

    # -- node events -------------------------------------------------------

    def handle_node_addition(
        self, u: int, incident_edges: Sequence[tuple[int, int]] = ()
    ) -> ChangeSummary:
        """Add ``u`` as a singleton, then insert its edges in the given order."""
        others = []
        for a, b in incident_edges:
            if u not in (a, b):
                raise ValueError(f"edge ({a}, {b}) is not incident to {u}")
            other = b if a == u else a
            if other not in self.graph.adj:
                raise MissingNode(f"node {other} not in graph")
            others.append(other)
        start_next = self.partition.next_id
        self.graph.add_node(u)
        c = self.partition.fresh_id()
        self.partition.assign(u, c)
        self._perm[u] = 0.0
        summary = self._summarize("new-node", [], start_next, [c])
        if others:
            summary.case = "new-node-with-edges"
            for v in others:
                summary.merge(self.handle_edge_addition(u, v))
        return summary

    def handle_node_deletion(self, u: int, order: Sequence[int] | None = None) -> ChangeSummary:
        """Delete ``u``'s edges one by one (ascending neighbor id unless
        ``order`` is given), then the isolated node itself."""
        nbrs = self.graph.neighbors(u)
        if order is None:
            order = sorted(nbrs)
        elif sorted(order) != sorted(nbrs):
            raise ValueError("order must list exactly the neighbors of u")
        summary = ChangeSummary("node-removed")
        for v in order:
            summary.merge(self.handle_edge_deletion(u, v))
        c = self.partition.unassign(u)
        self.graph.remove_node(u)
        self._total -= self._perm.pop(u)
        if c not in self.partition.members:
            summary.removed.append(c)
        return summary

    # -- edge addition -----------------------------------------------------

    def handle_edge_addition(self, u: int, v: int) -> ChangeSummary:
        adj, labels = self.graph.adj, self.partition.assignment
        self.graph.add_edge(u, v)
        self._refresh({u, v} | (adj[u] & adj[v]))
        cu, cv = labels[u], labels[v]
        if cu == cv:
            self.stats["intra_edge_additions"] += 1
            return ChangeSummary("intra-edge-added")
        return self._inter_edge_addition(u, v, cu, cv)

    def _inter_edge_addition(self, u: int, v: int, cu: int, cv: int) -> ChangeSummary:
        start_next = self.partition.next_id
        a = self.inter_edge_propagation(u, cv)
        self._rollback(a)
        b = self.inter_edge_propagation(v, cu)
        self._rollback(b)
        before = a.perm_before
        best = a if a.perm_after >= b.perm_after else b
        if best.perm_after <= before + EPS:
            self.stats["proposals_rejected"] += 1
            return ChangeSummary("inter-edge-added")
        if abs(a.perm_after - b.perm_after) <= EPS and a.groups != b.groups:
            # genuinely different structures of equal value: keep the incumbent
            self.stats["proposals_tied"] += 1
            return ChangeSummary("inter-edge-added")
        for node, _, to in best.moved_nodes:
            self._move(node, to)
        log.debug("edge (%d, %d): accepted %d moves, gain %.6g", u, v, len(best.moved_nodes), best.gain)
        self.stats["proposals_accepted"] += 1
        return self._summarize("inter-edge-added", best.moved_nodes, start_next, [cu, cv])

    def inter_edge_propagation(self, mover: int, target: int) -> MoveProposal:
        """Move ``mover`` into ``target`` and let its community follow.

        Former internal neighbors of each mover are visited in FIFO order
        (ascending id within one expansion); a visited node follows iff its
        own permanence strictly rises in ``target``. The moves are left
        applied; the caller either keeps them or passes the proposal to
        ``_rollback``.
        """
        adj, labels = self.graph.adj, self.partition.assignment
        source = labels[mover]
        proposal = MoveProposal(
            source, target, [], self._pair_sum(source, target), 0.0,
            _total=self._total, _next_id=self.partition.next_id,
        )
        journal = proposal.moved_nodes
        self._move(mover, target, journal)
        visited = {mover}
        frontier = deque()

        def expand(w):
            fresh = sorted(x for x in adj[w] if x not in visited and labels[x] == source)
            visited.update(fresh)
            frontier.extend(fresh)

        expand(mover)
        while frontier:
            w = frontier.popleft()
            if labels[w] != source:
                continue
            if perm_in(adj, labels, w, target) > self._perm[w] + EPS:
                self._move(w, target, journal)
                expand(w)
        proposal.perm_after = self._pair_sum(source, target)
        proposal.groups = self._groups(source, target)
        return proposal

    # -- edge deletion -----------------------------------------------------

    def handle_edge_deletion(self, u: int, v: int) -> ChangeSummary:
        adj, labels = self.graph.adj, self.partition.assignment
        common = adj[u] & adj[v] if u in adj and v in adj else set()
        self.graph.remove_edge(u, v)
        self._refresh({u, v} | common)
        cu, cv = labels[u], labels[v]
        du, dv = len(adj[u]), len(adj[v])
        start_next = self.partition.next_id
        if du == 0 or dv == 0:
            moved: list = []
            for x, dx in ((u, du), (v, dv)):
                if dx == 0:
                    self._isolate(x, moved)
            case = "both-endpoints-isolated" if du == dv == 0 else "endpoint-isolated"
            return self._summarize(case, moved, start_next, [cu, cv])
        if cu != cv:
            return ChangeSummary("inter-edge-removed")
        return self.intra_split_test(cu, u, v)

    def _isolate(self, x: int, journal: list) -> None:
        if len(self.partition.members[self.partition.assignment[x]]) > 1:
            self._move(x, self.partition.fresh_id(), journal)

    def _component(self, start: int, c: int) -> set[int]:
        adj, labels = self.graph.adj, self.partition.assignment
        seen = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for x in adj[w]:
                if x not in seen and labels[x] == c:
                    seen.add(x)
                    queue.append(x)
        return seen

    def intra_split_test(self, c: int, u: int, v: int) -> ChangeSummary:
        """After deleting intra-community edge (u, v), split ``c`` in two if
        u and v are no longer internally connected and the split does not
        lower the community's summed permanence.

        When the two sides share no edge, every member keeps its internal
        and external counts, so the split sum equals the unsplit sum; a tie
        therefore splits. Rejection only happens if rounding says otherwise.
        """
        members = self.partition.community_members(c)
        if u not in members or v not in members:
            raise MissingNode(f"nodes {u}, {v} are not both in community {c}")
        s_u = self._component(u, c)
        if v in s_u:
            return ChangeSummary("intra-edge-removed")
        s_v = members - s_u
        # the smaller side leaves; on a size tie, the side without min(c)
        if len(s_u) < len(s_v) or (len(s_u) == len(s_v) and min(members) not in s_u):
            leaving = s_u
        else:
            leaving = s_v
        unsplit = self.community_perm_sum(c)
        start_next = self.partition.next_id
        new = self.partition.fresh_id()
        proposal = MoveProposal(c, new, [], unsplit, 0.0, _total=self._total, _next_id=start_next)
        for w in sorted(leaving):
            self._move(w, new, proposal.moved_nodes)
        proposal.perm_after = self._pair_sum(c, new)
        if proposal.perm_after >= unsplit - EPS:
            self.stats["splits"] += 1
            log.debug("community %d split, %d nodes leave", c, len(leaving))
            return self._summarize("intra-edge-removed", proposal.moved_nodes, start_next, [c, new])
        self._rollback(proposal)
        return ChangeSummary("intra-edge-removed")
