"""Greedy static permanence maximizer used to build a base partition."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from .errors import ConfigInvalid, EmptyGraph
from .graph import Graph, Partition
from .permanence import graph_perm, permanence_value


@dataclass(frozen=True)
class InitConfig:
    max_sweeps: int = 20
    seed: int = 0
    min_gain: float = 1e-9
    restarts: int = 1

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ConfigInvalid("max_sweeps must be >= 1")
        if self.restarts < 1:
            raise ConfigInvalid("restarts must be >= 1")


def _best_move(adj, labels, u):
    """Best community for ``u`` among its own and its neighbors'.

    Returns ``(community, gain over staying)``; ties go to the lowest community id, with
    ``u``'s own community winning any tie it is part of.
    """
    nbrs = adj[u]
    d = len(nbrs)
    cur = labels[u]
    if d == 0:
        return cur, 0.0
    tally = Counter(labels[w] for w in nbrs)
    pairs = Counter()
    for w in nbrs:
        lw = labels[w]
        if tally[lw] < 2:
            continue
        for x in adj[w] & nbrs:
            if labels[x] == lw:
                pairs[lw] += 1
    ranked = tally.most_common(2)
    top_label, top = ranked[0]
    second = ranked[1][1] if len(ranked) > 1 else 0

    def score(c):
        internal = tally.get(c, 0)
        emax = second if c == top_label else top
        return permanence_value(internal, d, emax, pairs.get(c, 0) // 2)

    best_c, best = cur, score(cur)
    for c in sorted(tally):
        if c == cur:
            continue
        s = score(c)
        if s > best:
            best_c, best = c, s
    return best_c, best - score(cur)


def _sweep_maximize(g: Graph, cfg: InitConfig, seed: int) -> Partition:
    p = Partition.singletons(g.adj)
    labels = p.assignment
    order = g.nodes()
    rng = random.Random(seed)
    for _ in range(cfg.max_sweeps):
        rng.shuffle(order)
        moved = 0
        for u in order:
            c, gain = _best_move(g.adj, labels, u)
            if c != labels[u] and gain > cfg.min_gain:
                p.move_node(u, c)
                moved += 1
        if not moved:
            break
    return p


def static_maximize(g: Graph, cfg: InitConfig = InitConfig()) -> Partition:
    """Local-moving permanence maximization from an all-singleton start.

    Each sweep visits the nodes in a seeded shuffle of ascending-id order and
    moves every node to the neighboring community that maximizes its own
    permanence, when the gain exceeds ``cfg.min_gain``. With
    ``cfg.restarts > 1`` the best of several seeds (by graph permanence) is
    kept. The result is relabelled densely by smallest member id.
    """
    if len(g) == 0:
        raise EmptyGraph("cannot initialize communities of an empty graph")
    best, best_val = None, None
    for k in range(cfg.restarts):
        p = _sweep_maximize(g, cfg, cfg.seed + k)
        val = graph_perm(g, p).graph_perm if cfg.restarts > 1 else 0.0
        if best is None or val > best_val:
            best, best_val = p, val
    return Partition.from_labels(best.assignment)
