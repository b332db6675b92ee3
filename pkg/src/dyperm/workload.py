"""Synthetic dynamic workloads and snapshot-to-event conversion.

The generator is a planted-partition model: ``k`` equal-size blocks, edge
probabilities chosen so that a node has ``avg_degree`` neighbors on average
of which a fraction ``mu`` lies outside its block. Every step rewires a
``churn`` fraction of the edges (deletions, then replacement additions
drawn from the same model) and moves a few nodes to another block, their
edges redrawn so the structure follows the new label.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid
from .graph import NEW_EDGE, NEW_NODE, REMOVE_EDGE, REMOVE_NODE, AtomicEvent, Graph, edge_key
from .io import write_communities, write_edgelist, write_events


@dataclass(frozen=True)
class GenConfig:
    n: int = 1000
    k: int = 20
    mu: float = 0.2
    avg_degree: float = 15.0
    steps: int = 20
    churn: float = 0.02
    seed: int = 0
    switch: float | None = None  # fraction of nodes changing block per step; churn / 2 if unset

    def __post_init__(self):
        if not self.n >= self.k >= 1:
            raise ConfigInvalid(f"need n >= k >= 1, got n={self.n}, k={self.k}")
        if not 0 <= self.mu < 1:
            raise ConfigInvalid(f"mu must lie in [0, 1), got {self.mu}")
        if not 0 < self.avg_degree < self.n:
            raise ConfigInvalid(f"avg_degree must lie in (0, n), got {self.avg_degree}")
        if not 0 <= self.churn < 1:
            raise ConfigInvalid(f"churn must lie in [0, 1), got {self.churn}")
        if self.steps < 0:
            raise ConfigInvalid("steps must be >= 0")
        if self.k == 1 and self.mu > 0:
            raise ConfigInvalid("mu > 0 needs at least two communities")
        if self.switch is not None and not 0 <= self.switch < 1:
            raise ConfigInvalid(f"switch must lie in [0, 1), got {self.switch}")

    @property
    def switch_fraction(self) -> float:
        return self.churn / 2 if self.switch is None else self.switch


@dataclass
class DynamicWorkload:
    config: GenConfig
    base: Graph
    truth: list[dict[int, int]]  # one labelling per time-stamp 0..steps
    events: list[AtomicEvent]

    def write(self, out_dir) -> None:
        os.makedirs(out_dir, exist_ok=True)
        write_edgelist(self.base, os.path.join(out_dir, "t0.edges"))
        for t, labels in enumerate(self.truth):
            write_communities(labels, os.path.join(out_dir, f"t{t}.comms"))
        write_events(self.events, os.path.join(out_dir, "events.tsv"))


class _Planted:
    """Mutable planted-partition state driven by one RNG."""

    def __init__(self, cfg: GenConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.rng = rng
        self.labels = np.arange(cfg.n) % cfg.k
        self.blocks = [set(np.flatnonzero(self.labels == b).tolist()) for b in range(cfg.k)]
        self.edges: set[tuple[int, int]] = set()
        self.adj: list[set[int]] = [set() for _ in range(cfg.n)]

    def probabilities(self) -> tuple[float, float]:
        cfg = self.cfg
        size = cfg.n / cfg.k
        p_in = (1 - cfg.mu) * cfg.avg_degree / max(size - 1, 1)
        p_out = cfg.mu * cfg.avg_degree / (cfg.n - size) if cfg.k > 1 else 0.0
        return min(p_in, 1.0), min(p_out, 1.0)

    def sample_base(self) -> None:
        p_in, p_out = self.probabilities()
        n = self.cfg.n
        iu, ju = np.triu_indices(n, 1)
        same = self.labels[iu] == self.labels[ju]
        draw = self.rng.random(iu.size)
        keep = np.where(same, draw < p_in, draw < p_out)
        for u, v in zip(iu[keep].tolist(), ju[keep].tolist()):
            self._add(u, v)

    def _add(self, u, v):
        self.edges.add(edge_key(u, v))
        self.adj[u].add(v)
        self.adj[v].add(u)

    def _remove(self, u, v):
        self.edges.discard(edge_key(u, v))
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def draw_partner(self, u: int, external: bool):
        """A non-neighbor of ``u``, inside or outside its block; None if saturated."""
        lab = self.labels[u]
        if external:
            pool_size = self.cfg.n - len(self.blocks[lab])
        else:
            pool_size = len(self.blocks[lab]) - 1
        if pool_size <= 0:
            return None
        for _ in range(32):
            v = int(self.rng.integers(self.cfg.n))
            if v == u or v in self.adj[u]:
                continue
            if (self.labels[v] != lab) == external:
                return v
        return None

    def new_edge(self):
        """One edge drawn from the planted model, or None if the draw fails."""
        u = int(self.rng.integers(self.cfg.n))
        external = self.cfg.k > 1 and self.rng.random() < self.cfg.mu
        v = self.draw_partner(u, external)
        return None if v is None else edge_key(u, v)


def gen_dynamic(cfg: GenConfig) -> DynamicWorkload:
    """Generate a base snapshot, per-step ground truth and an event stream.

    Step ``t`` (1-based) emits, with timestamp ``t``: the edge rewiring of
    the nodes that switch block, then ``churn * |E|`` random deletions,
    then as many additions. Deterministic for a given config.
    """
    rng = np.random.default_rng(cfg.seed)
    state = _Planted(cfg, rng)
    state.sample_base()
    base = Graph(sorted(state.edges), nodes=range(cfg.n))
    truth = [dict(enumerate(state.labels.tolist()))]
    events: list[AtomicEvent] = []

    for t in range(1, cfg.steps + 1):
        step: list[AtomicEvent] = []
        n_switch = int(round(cfg.switch_fraction * cfg.n)) if cfg.k > 1 else 0
        if n_switch:
            movers = sorted(rng.choice(cfg.n, size=n_switch, replace=False).tolist())
            for u in movers:
                old = int(state.labels[u])
                new = int(rng.integers(cfg.k - 1))
                new += new >= old
                state.blocks[old].discard(u)
                state.blocks[new].add(u)
                state.labels[u] = new
                d = len(state.adj[u])
                for v in sorted(state.adj[u]):
                    state._remove(u, v)
                    step.append(AtomicEvent(t, REMOVE_EDGE, *edge_key(u, v)))
                added = 0
                for _ in range(4 * d):
                    if added == d:
                        break
                    v = state.draw_partner(u, cfg.k > 1 and rng.random() < cfg.mu)
                    if v is None:
                        continue
                    state._add(u, v)
                    step.append(AtomicEvent(t, NEW_EDGE, *edge_key(u, v)))
                    added += 1

        n_rewire = int(round(cfg.churn * len(state.edges)))
        if n_rewire:
            pool = sorted(state.edges)
            for i in sorted(rng.choice(len(pool), size=n_rewire, replace=False).tolist()):
                u, v = pool[i]
                state._remove(u, v)
                step.append(AtomicEvent(t, REMOVE_EDGE, u, v))
            added = 0
            for _ in range(8 * n_rewire):
                if added == n_rewire:
                    break
                e = state.new_edge()
                if e is None:
                    continue
                state._add(*e)
                step.append(AtomicEvent(t, NEW_EDGE, *e))
                added += 1
        events.extend(step)
        truth.append(dict(enumerate(state.labels.tolist())))
    return DynamicWorkload(cfg, base, truth, events)


def snapshot_diff(a: Graph, b: Graph, timestamp: int = 1) -> list[AtomicEvent]:
    """Events turning snapshot ``a`` into ``b``.

    Order: node additions, edge additions, edge removals, node removals,
    each group in ascending id order, so no event names an absent node.
    """
    ea = {edge_key(u, v) for u, v in a.edges()}
    eb = {edge_key(u, v) for u, v in b.edges()}
    na, nb = set(a.adj), set(b.adj)
    out = [AtomicEvent(timestamp, NEW_NODE, u) for u in sorted(nb - na)]
    out += [AtomicEvent(timestamp, NEW_EDGE, u, v) for u, v in sorted(eb - ea)]
    out += [AtomicEvent(timestamp, REMOVE_EDGE, u, v) for u, v in sorted(ea - eb)]
    out += [AtomicEvent(timestamp, REMOVE_NODE, u) for u in sorted(na - nb)]
    return out


def apply_to_graph(g: Graph, e: AtomicEvent) -> None:
    if e.kind == NEW_NODE:
        g.add_node(e.u)
    elif e.kind == REMOVE_NODE:
        g.remove_node(e.u)
    elif e.kind == NEW_EDGE:
        g.add_edge(e.u, e.v)
    else:
        g.remove_edge(e.u, e.v)


def replay(g: Graph, events) -> Graph:
    """Apply events to a copy of ``g`` without any community bookkeeping."""
    g = g.copy()
    for e in events:
        apply_to_graph(g, e)
    return g
