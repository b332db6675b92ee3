"""
Scoring a partition with permanence
===================================

Permanence rates how firmly a vertex sits in its community: the share of
its edges that stay inside, discounted by the strongest external pull,
minus a penalty for internal neighbors that do not know each other.
"""

from dyperm import Graph, Partition, graph_perm, vertex_breakdown

# Two triangles joined by a single bridge edge (2, 3).
g = Graph([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])

good = Partition({0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1})
report = graph_perm(g, good)
print(f"triangles apart:    graph_perm = {report.graph_perm:.4f}")
print(report.tsv())

# The bridge endpoints pay for their external neighbor, the others score 1.
b = vertex_breakdown(g, good, 2)
print("vertex 2:", b)

# Lumping everything together removes the external pull entirely, so every
# vertex falls back to I/d = 1. With nothing else around, the merge wins.
merged = Partition({u: 0 for u in g})
print(f"one community:      graph_perm = {graph_perm(g, merged).graph_perm:.4f}")

# Singletons are the worst case here: every vertex has I = 0.
print(f"all singletons:     graph_perm = {graph_perm(g, Partition.singletons(g)).graph_perm:.4f}")
