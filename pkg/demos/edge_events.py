"""
How single edge events reshape communities
==========================================

The engine only looks at the communities an event touches. We walk through
three small cases: a hub dragging its leaves, a bridge that is not worth a
merge, and a community falling apart when its last internal link goes.
"""

from dyperm import DyPermEngine, Graph, Partition

# A 3-node star (hub 0) next to a triangle.
engine = DyPermEngine(
    Graph([(0, 1), (0, 2), (3, 4), (4, 5), (3, 5)]),
    Partition({0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1}),
)
print("before:", engine.partition.groups(), f"perm={engine.graph_perm:.4f}")

# Connecting the hub to the triangle pulls the hub over, and each leaf,
# stranded without its hub, follows.
summary = engine.handle_edge_addition(0, 3)
print("case", summary.case, "moved", [m[0] for m in summary.moved])
print("after: ", engine.partition.groups(), f"perm={engine.graph_perm:.4f}")
print("engine counters:", dict(engine.stats))

# Two triangles in one community, held together by one edge.
engine = DyPermEngine(
    Graph([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]),
    Partition({u: 0 for u in range(6)}),
)
summary = engine.handle_edge_deletion(2, 3)
print("\ncase", summary.case, "->", engine.partition.groups())

# Removing an edge inside a 4-clique leaves it connected, so nothing splits.
k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
engine = DyPermEngine(Graph(k4), Partition({u: 0 for u in range(4)}))
engine.handle_edge_deletion(0, 1)
print("clique minus one edge ->", engine.partition.groups())
