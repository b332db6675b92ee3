import random
import sys

import pytest

from dyperm.graph import NEW_EDGE, NEW_NODE, REMOVE_EDGE, REMOVE_NODE, AtomicEvent, Graph, Partition


def random_instance(rng: random.Random, n_max=64, p_max=0.3, k_max=6):
    """A random simple graph with a random partition of its nodes."""
    n = rng.randint(1, n_max)
    p = rng.uniform(0.02, p_max)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    g = Graph(edges, nodes=range(n))
    k = rng.randint(1, min(k_max, n))
    labels = {u: rng.randrange(k) for u in range(n)}
    return g, Partition(labels)


def build(edges, labels):
    g = Graph(edges, nodes=labels)
    return g, Partition(labels)


def random_stream(rng, g, n_events):
    """Valid random events against an evolving copy of ``g``."""
    g = g.copy()
    nxt = max(g.adj, default=-1) + 1
    out = []
    while len(out) < n_events:
        r = rng.random()
        nodes = list(g.adj)
        if r < 0.05:
            out.append(AtomicEvent(1, NEW_NODE, nxt))
            g.add_node(nxt)
            nxt += 1
        elif r < 0.08 and len(nodes) > 5:
            u = rng.choice(nodes)
            g.remove_node(u)
            out.append(AtomicEvent(1, REMOVE_NODE, u))
        elif r < 0.55 and len(nodes) > 1:
            u, v = rng.sample(nodes, 2)
            if not g.has_edge(u, v):
                g.add_edge(u, v)
                out.append(AtomicEvent(1, NEW_EDGE, u, v))
        elif g.n_edges:
            u = rng.choice([x for x in nodes if g.adj[x]])
            v = rng.choice(sorted(g.adj[u]))
            g.remove_edge(u, v)
            out.append(AtomicEvent(1, REMOVE_EDGE, u, v))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20240611)
