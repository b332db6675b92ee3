"""Dynamic undirected simple graph, the partition it carries, and atomic events."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    DuplicateEdge,
    DuplicateNode,
    MissingCommunity,
    MissingEdge,
    MissingNode,
    SelfLoop,
)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Adjacency-set graph. No self-loops, no parallel edges, no weights."""

    __slots__ = ("adj", "_n_edges")

    def __init__(self, edges: Iterable[tuple[int, int]] = (), nodes: Iterable[int] = ()):
        self.adj: dict[int, set[int]] = {}
        self._n_edges = 0
        for u in nodes:
            if u not in self.adj:
                self.add_node(u)
        for u, v in edges:
            for w in (u, v):
                if w not in self.adj:
                    self.add_node(w)
            self.add_edge(u, v)

    def __contains__(self, u) -> bool:
        return u in self.adj

    def __len__(self) -> int:
        return len(self.adj)

    def __iter__(self) -> Iterator[int]:
        return iter(self.adj)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted ``(u, v)`` pairs with ``u < v``."""
        return sorted((u, v) for u, nbrs in self.adj.items() for v in nbrs if u < v)

    def neighbors(self, u: int) -> set[int]:
        try:
            return self.adj[u]
        except KeyError:
            raise MissingNode(f"node {u} not in graph") from None

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adj.get(u)
        return nbrs is not None and v in nbrs

    def add_node(self, u: int) -> None:
        if u in self.adj:
            raise DuplicateNode(f"node {u} already present")
        if u < 0:
            raise ValueError(f"node ids must be non-negative, got {u}")
        self.adj[u] = set()

    def remove_node(self, u: int) -> set[tuple[int, int]]:
        """Drop ``u`` and its incident edges; returns the removed edges."""
        nbrs = self.neighbors(u)
        removed = {edge_key(u, v) for v in nbrs}
        for v in nbrs:
            self.adj[v].discard(u)
        self._n_edges -= len(nbrs)
        del self.adj[u]
        return removed

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise SelfLoop(f"self-loop on node {u}")
        for w in (u, v):
            if w not in self.adj:
                raise MissingNode(f"node {w} not in graph")
        if v in self.adj[u]:
            raise DuplicateEdge(f"edge ({u}, {v}) already present")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self._n_edges += 1

    def remove_edge(self, u: int, v: int) -> None:
        for w in (u, v):
            if w not in self.adj:
                raise MissingNode(f"node {w} not in graph")
        if v not in self.adj[u]:
            raise MissingEdge(f"edge ({u}, {v}) not present")
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self._n_edges -= 1

    def copy(self) -> Graph:
        g = Graph()
        g.adj = {u: set(nbrs) for u, nbrs in self.adj.items()}
        g._n_edges = self._n_edges
        return g

    def audit(self) -> None:
        """Raise AssertionError if symmetry, simplicity or the edge count is off."""
        half = 0
        for u, nbrs in self.adj.items():
            assert u not in nbrs, f"self-loop at {u}"
            for v in nbrs:
                assert v in self.adj, f"dangling neighbor {v} of {u}"
                assert u in self.adj[v], f"asymmetric edge ({u}, {v})"
            half += len(nbrs)
        assert half == 2 * self._n_edges, "edge counter out of sync"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={len(self.adj)}, m={self._n_edges})"


class Partition:
    """Node -> community assignment kept in lockstep with its inverse.

    Community ids come from a monotone counter; :meth:`fresh_id` never hands
    out an id twice, even after the community it named has been emptied.
    """

    __slots__ = ("assignment", "members", "_next_id")

    def __init__(self, assignment: dict[int, int] | None = None):
        self.assignment: dict[int, int] = {}
        self.members: dict[int, set[int]] = {}
        self._next_id = 0
        for u, c in (assignment or {}).items():
            self.assign(u, c)

    @classmethod
    def singletons(cls, nodes: Iterable[int]) -> Partition:
        p = cls()
        for u in sorted(nodes):
            p.assign(u, p.fresh_id())
        return p

    @classmethod
    def from_labels(cls, labels: dict[int, int]) -> Partition:
        """Build a partition from arbitrary labels, remapped to 0..k-1.

        Remapping follows the smallest node id in each group so that the
        result does not depend on the label values themselves.
        """
        first: dict[int, int] = {}
        for u in sorted(labels):
            first.setdefault(labels[u], u)
        order = sorted(first, key=first.__getitem__)
        remap = {lab: i for i, lab in enumerate(order)}
        return cls({u: remap[labels[u]] for u in sorted(labels)})

    def fresh_id(self) -> int:
        c = self._next_id
        self._next_id += 1
        return c

    @property
    def next_id(self) -> int:
        return self._next_id

    def __contains__(self, u) -> bool:
        return u in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    @property
    def n_communities(self) -> int:
        return len(self.members)

    def community(self, u: int) -> int:
        try:
            return self.assignment[u]
        except KeyError:
            raise MissingNode(f"node {u} has no community") from None

    def community_members(self, c: int) -> set[int]:
        try:
            return self.members[c]
        except KeyError:
            raise MissingCommunity(f"community {c} does not exist") from None

    def assign(self, u: int, c: int) -> None:
        """Place an unassigned node into community ``c`` (created if needed)."""
        if u in self.assignment:
            raise DuplicateNode(f"node {u} already assigned")
        self.assignment[u] = c
        self.members.setdefault(c, set()).add(u)
        if c >= self._next_id:
            self._next_id = c + 1

    def unassign(self, u: int) -> int:
        c = self.community(u)
        del self.assignment[u]
        group = self.members[c]
        group.remove(u)
        if not group:
            del self.members[c]
        return c

    def move_node(self, u: int, c: int) -> int:
        """Move ``u`` into ``c``; returns the community it left."""
        old = self.community(u)
        if old == c:
            return old
        group = self.members[old]
        group.remove(u)
        if not group:
            del self.members[old]
        self.assignment[u] = c
        self.members.setdefault(c, set()).add(u)
        if c >= self._next_id:
            self._next_id = c + 1
        return old

    def copy(self) -> Partition:
        p = Partition()
        p.assignment = dict(self.assignment)
        p.members = {c: set(m) for c, m in self.members.items()}
        p._next_id = self._next_id
        return p

    def groups(self) -> list[frozenset[int]]:
        """Communities as a canonical, label-free list of frozensets."""
        return sorted((frozenset(m) for m in self.members.values()), key=min)

    def audit(self, nodes: Iterable[int] | None = None) -> None:
        seen = 0
        for c, group in self.members.items():
            assert group, f"empty community {c} kept"
            assert c < self._next_id, f"community {c} beyond id counter"
            for u in group:
                assert self.assignment.get(u) == c, f"node {u} listed in {c} but assigned elsewhere"
            seen += len(group)
        assert seen == len(self.assignment), "assignment and members disagree"
        if nodes is not None:
            assert set(nodes) == set(self.assignment), "partition does not cover the graph"

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.assignment == other.assignment

    def __repr__(self) -> str:
        return f"Partition(n={len(self.assignment)}, k={len(self.members)})"


# Event opcodes as they appear in event-stream files.
NEW_NODE = "AN"
REMOVE_NODE = "RN"
NEW_EDGE = "AE"
REMOVE_EDGE = "RE"

_ARITY = {NEW_NODE: 1, REMOVE_NODE: 1, NEW_EDGE: 2, REMOVE_EDGE: 2}


@dataclass(frozen=True)
class AtomicEvent:
    timestamp: int
    kind: str
    u: int
    v: int | None = None
    line: int | None = None  # source line in the stream file, for diagnostics

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if (self.v is None) != (_ARITY[self.kind] == 1):
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} argument(s)")
        if self.kind in (NEW_EDGE, REMOVE_EDGE) and self.u == self.v:
            raise SelfLoop(f"{self.kind} event with u == v == {self.u}")

    @property
    def is_edge(self) -> bool:
        return self.v is not None

    def format(self) -> str:
        args = f"{self.u}" if self.v is None else f"{self.u} {self.v}"
        return f"{self.timestamp} {self.kind} {args}"
