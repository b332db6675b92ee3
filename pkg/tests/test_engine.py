import itertools
import random

import pytest

from dyperm.engine import DyPermEngine
from dyperm.errors import AuditFailure, DuplicateEdge, MissingEdge, MissingNode
from dyperm.graph import NEW_EDGE, NEW_NODE, REMOVE_EDGE, AtomicEvent, Graph, Partition
from dyperm.permanence import community_perm_sum, graph_perm, vertex_perm
from dyperm.static import static_maximize
from dyperm.workload import GenConfig, gen_dynamic

from conftest import random_stream
from oracle import community_sum_oracle, graph_perm_oracle

TRI_A = [(0, 1), (1, 2), (0, 2)]
TRI_B = [(3, 4), (4, 5), (3, 5)]


def engine(edges, labels, audit=True):
    return DyPermEngine(Graph(edges, nodes=labels), Partition(labels), audit=audit)


def state(e: DyPermEngine):
    return (
        dict(e.partition.assignment),
        {c: set(m) for c, m in e.partition.members.items()},
        e.partition.next_id,
        dict(e._perm),
        e._total,
        e.graph.copy().adj,
    )


# -- dispatch ---------------------------------------------------------------


def test_new_node_is_fresh_singleton():
    e = engine(TRI_A, {0: 0, 1: 0, 2: 0})
    nxt = e.fresh_community_counter
    s = e.apply_event(AtomicEvent(1, NEW_NODE, 7))
    c = e.partition.community(7)
    assert c == nxt and e.partition.members[c] == {7}
    assert s.case == "new-node" and s.created == [c]


def test_intra_edge_keeps_partition():
    e = engine([(0, 1), (1, 2), (2, 3)], {i: 0 for i in range(4)})
    before = e.partition.copy()
    e.apply_event(AtomicEvent(1, NEW_EDGE, 0, 3))
    assert e.partition == before and e.graph.has_edge(0, 3)


def test_sole_edge_removal_gives_singletons():
    e = engine([(0, 1)], {0: 0, 1: 0})
    s = e.apply_event(AtomicEvent(1, REMOVE_EDGE, 0, 1))
    assert s.case == "both-endpoints-isolated"
    assert e.partition.members[e.partition.community(0)] == {0}
    assert e.partition.members[e.partition.community(1)] == {1}
    assert e.partition.n_communities == 2


def test_errors_carry_line_numbers():
    e = engine([(0, 1)], {0: 0, 1: 0})
    with pytest.raises(DuplicateEdge, match="line 12"):
        e.apply_event(AtomicEvent(1, NEW_EDGE, 0, 1, line=12))
    e.apply_event(AtomicEvent(1, REMOVE_EDGE, 0, 1))
    with pytest.raises(MissingEdge, match="line 3"):
        e.apply_event(AtomicEvent(1, REMOVE_EDGE, 0, 1, line=3))
    with pytest.raises(MissingNode):
        e.apply_event(AtomicEvent(1, NEW_EDGE, 0, 9))


def test_partition_must_cover_graph():
    with pytest.raises(MissingNode):
        DyPermEngine(Graph([(0, 1)]), Partition({0: 0}))


# -- node addition ------------------------------------------------------------


def test_node_addition_without_edges():
    e = engine(TRI_A, {0: 0, 1: 0, 2: 0})
    before = e.partition.copy()
    e.handle_node_addition(9)
    assert e.partition.members[e.partition.community(9)] == {9}
    for u in before.assignment:
        assert e.partition.community(u) == before.community(u)


def test_node_addition_order_into_one_community():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
    labels = {i: 0 for i in range(4)}
    finals = set()
    for order in itertools.permutations([0, 1, 3]):
        e = engine(edges, labels)
        e.handle_node_addition(4, [(4, v) for v in order])
        finals.add(round(e.graph_perm, 9))
    assert len(finals) == 1


def test_node_addition_picks_best_assignment():
    k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    labels = {0: 0, 1: 0, 2: 0, 3: 0, 4: 1, 5: 1, 6: 1}
    incident = [(7, 0), (7, 1), (7, 4)]
    e = engine(k4 + [(4, 5), (5, 6), (4, 6)], labels)
    e.handle_node_addition(7, incident)

    # brute force over u's candidate communities, everything else fixed
    edges = k4 + [(4, 5), (5, 6), (4, 6)] + incident
    scores = {}
    for c in (0, 1, 99):
        lab = {**labels, **{7: c}}
        scores[c] = graph_perm_oracle(range(8), edges, lab)
    best = max(scores, key=scores.get)
    assert e.partition.members[e.partition.community(7)] >= {7} | {
        u for u, c in labels.items() if c == best
    }
    assert e.graph_perm == pytest.approx(float(scores[best]), abs=1e-12)


# -- node deletion ------------------------------------------------------------


def test_delete_isolated_singleton():
    e = engine(TRI_A, {0: 0, 1: 0, 2: 0})
    e.handle_node_addition(5)
    k = e.partition.n_communities
    e.handle_node_deletion(5)
    assert e.partition.n_communities == k - 1
    assert 5 not in e.graph and 5 not in e.partition


def test_node_deletion_all_orders():
    edges = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4), (4, 5), (5, 6), (4, 6)]
    labels = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1, 6: 1}
    finals = set()
    for order in itertools.permutations([1, 2, 3, 4]):
        e = engine(edges, labels)
        e.handle_node_deletion(0, list(order))
        finals.add(round(e.graph_perm, 9))
    assert len(finals) == 1


def test_bowtie_cut_vertex_deletion():
    bowtie = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]
    labels = {i: 0 for i in range(5)}
    e = engine(bowtie, labels)
    e.handle_node_deletion(2)
    # oracle: members keep their counts, so split and unsplit sums agree (4 == 4)
    rest = [(0, 1), (3, 4)]
    unsplit = community_sum_oracle(rest, {0: 0, 1: 0, 3: 0, 4: 0}, [0, 1, 3, 4])
    split = community_sum_oracle(rest, {0: 0, 1: 0, 3: 1, 4: 1}, [0, 1, 3, 4])
    assert unsplit == split == 4
    # a tie splits the disconnected remainder
    assert e.partition.groups() == [frozenset({0, 1}), frozenset({3, 4})]
    assert e.graph_perm == 1.0


# -- edge addition ------------------------------------------------------------


def test_intra_edge_in_four_cycle():
    e = engine([(0, 1), (1, 2), (2, 3), (3, 0)], {i: 0 for i in range(4)})
    before = e.partition.copy()
    e.handle_edge_addition(0, 2)
    assert e.partition == before


def test_bridge_between_embedded_triangles_rejected():
    k4 = [(6, 7), (6, 8), (6, 9), (7, 8), (7, 9), (8, 9)]
    spokes = [(0, 6), (1, 7), (2, 8), (3, 9), (4, 6), (5, 7)]
    labels = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1, 6: 2, 7: 2, 8: 2, 9: 2}
    e = engine(TRI_A + TRI_B + k4 + spokes, labels)
    before = e.partition.copy()
    e.handle_edge_addition(2, 3)
    assert e.partition == before

    # oracle on this instance: merge 17/6 < separate 11/3
    edges = TRI_A + TRI_B + k4 + spokes + [(2, 3)]
    sep = community_sum_oracle(edges, labels, range(6))
    merged = community_sum_oracle(edges, {**labels, **{3: 0, 4: 0, 5: 0}}, range(6))
    assert merged < sep


def test_lone_pair_joins_triangle():
    labels = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1}
    e = engine(TRI_A + [(3, 4)], labels)
    e.handle_edge_addition(3, 0)

    # enumerate every subset of the pair moving into the triangle's community
    edges = TRI_A + [(3, 4), (0, 3)]
    best, best_val = None, None
    for r in range(3):
        for subset in itertools.combinations([3, 4], r):
            lab = {**labels, **{u: 0 for u in subset}}
            val = community_sum_oracle(edges, lab, range(5))
            if best_val is None or val > best_val:
                best, best_val = subset, val
    assert best == (3, 4) and best_val == 5
    assert e.partition.groups() == [frozenset(range(5))]
    assert e.total_perm == pytest.approx(5.0, abs=1e-12)


# -- propagation ----------------------------------------------------------------


def test_propagation_with_empty_frontier():
    # 5 is a singleton whose only neighbor lies in the target
    e = engine(TRI_A + [(0, 5)], {0: 0, 1: 0, 2: 0, 5: 1})
    prop = e.inter_edge_propagation(5, 0)
    assert prop.moved_nodes == [(5, 1, 0)]
    assert prop.perm_after > prop.perm_before


def test_star_hub_drags_leaves():
    # star {0: hub, 1, 2} and triangle {3, 4, 5}; new edge hub-3
    labels = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1}
    e = engine([(0, 1), (0, 2)] + TRI_B, labels)
    e.graph.add_edge(0, 3)
    e._refresh([0, 3])
    assert e.perm(1) == 1.0
    prop = e.inter_edge_propagation(0, 1)
    assert prop.moved_nodes == [(0, 0, 1), (1, 0, 1), (2, 0, 1)]
    # step by step: each leaf goes from 1 (with hub) via -1 (hub gone) to 1 (joined)
    assert prop.perm_before == pytest.approx(13 / 3, abs=1e-12)
    assert prop.perm_after == pytest.approx(6.0, abs=1e-12)
    e._rollback(prop)

    e = engine([(0, 1), (0, 2)] + TRI_B, labels)
    e.handle_edge_addition(0, 3)
    assert e.partition.groups() == [frozenset(range(6))]


def test_leaf_gain_is_stepwise():
    labels = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1}
    g = Graph([(0, 1), (0, 2), (0, 3)] + TRI_B)
    lab = {**labels, **{0: 1}}
    assert vertex_perm(g.adj, lab, 1) == -1.0  # hub left, leaf stranded
    lab[1] = 1
    assert vertex_perm(g.adj, lab, 1) == 1.0


def test_symmetric_tie_keeps_status_quo():
    # two mirrored stars, hubs 3 and 7; bridge joins leaf 0 with leaf 4
    half = [(0, 3), (1, 3), (2, 3)]
    edges = half + [(a + 4, b + 4) for a, b in half]
    labels = {i: 0 if i < 4 else 1 for i in range(8)}
    e = engine(edges, labels)
    before = e.partition.copy()
    e.handle_edge_addition(0, 4)
    assert e.stats["proposals_tied"] == 1
    assert e.partition == before

    e2 = engine(edges + [(0, 4)], labels)
    a = e2.inter_edge_propagation(0, 1)
    e2._rollback(a)
    b = e2.inter_edge_propagation(4, 0)
    e2._rollback(b)
    assert a.perm_after == b.perm_after > a.perm_before
    assert a.groups != b.groups


def test_rollback_is_bit_identical(rng):
    for _ in range(30):
        w = gen_dynamic(GenConfig(n=40, k=3, mu=0.3, avg_degree=6, steps=0, seed=rng.randrange(10**6)))
        e = DyPermEngine(w.base, Partition(w.truth[0]))
        u, v = rng.sample(range(40), 2)
        if e.graph.has_edge(u, v) or e.partition.community(u) == e.partition.community(v):
            continue
        e.graph.add_edge(u, v)
        e._refresh({u, v} | (e.graph.adj[u] & e.graph.adj[v]))
        snap = state(e)
        prop = e.inter_edge_propagation(u, e.partition.community(v))
        e._rollback(prop)
        assert state(e) == snap


# -- edge deletion ------------------------------------------------------------


def test_inter_bridge_deletion_keeps_partition():
    labels = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1}
    e = engine(TRI_A + TRI_B + [(2, 3)], labels)
    before = e.partition.copy()
    p2, p3 = e.perm(2), e.perm(3)
    s = e.handle_edge_deletion(2, 3)
    assert s.case == "inter-edge-removed" and e.partition == before
    assert e.perm(2) >= p2 and e.perm(3) >= p3


def test_k4_edge_deletion_keeps_clique():
    k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    e = engine(k4, {i: 0 for i in range(4)})
    e.handle_edge_deletion(0, 1)
    assert e.partition.n_communities == 1
    # oracle: no 2-way split of the remaining graph beats the whole
    edges = [x for x in k4 if x != (0, 1)]
    whole = community_sum_oracle(edges, {i: 0 for i in range(4)}, range(4))
    for r in range(1, 3):
        for side in itertools.combinations(range(4), r):
            lab = {i: int(i in side) for i in range(4)}
            assert community_sum_oracle(edges, lab, range(4)) <= whole


def test_degree_one_endpoint_isolated():
    e = engine(TRI_A + [(2, 3)], {0: 0, 1: 0, 2: 0, 3: 0})
    s = e.handle_edge_deletion(2, 3)
    assert s.case == "endpoint-isolated"
    assert e.partition.members[e.partition.community(3)] == {3}
    assert e.partition.members[e.partition.community(0)] == {0, 1, 2}


# -- intra split ---------------------------------------------------------------


def test_split_two_triangles():
    labels = {i: 0 for i in range(6)}
    e = engine(TRI_A + TRI_B + [(2, 3)], labels)
    s = e.handle_edge_deletion(2, 3)
    assert s.case == "intra-edge-removed"
    assert e.partition.groups() == [frozenset({0, 1, 2}), frozenset({3, 4, 5})]
    # oracle: split and unsplit sums coincide (6 == 6); the tie splits
    edges = TRI_A + TRI_B
    assert community_sum_oracle(edges, labels, range(6)) == 6
    assert community_sum_oracle(edges, {i: int(i > 2) for i in range(6)}, range(6)) == 6


def test_five_cycle_stays_whole():
    cyc = [(i, (i + 1) % 5) for i in range(5)]
    e = engine(cyc, {i: 0 for i in range(5)})
    e.handle_edge_deletion(0, 1)
    assert e.partition.n_communities == 1


def test_path_split_direct():
    e = engine([(0, 1), (1, 2)], {0: 0, 1: 0, 2: 0})
    e.graph.remove_edge(1, 2)
    e._refresh([1, 2])
    unsplit = community_sum_oracle([(0, 1)], {0: 0, 1: 0, 2: 0}, range(3))
    split = community_sum_oracle([(0, 1)], {0: 0, 1: 0, 2: 1}, range(3))
    assert unsplit == split == 2
    e.intra_split_test(0, 1, 2)
    assert e.partition.groups() == [frozenset({0, 1}), frozenset({2})]


# -- stream-level invariants --------------------------------------------------


def test_audit_over_random_streams(rng):
    for _ in range(5):
        w = gen_dynamic(GenConfig(n=50, k=4, mu=0.3, avg_degree=6, steps=0, seed=rng.randrange(10**6)))
        e = DyPermEngine(w.base.copy(), static_maximize(w.base), audit=True)
        for ev in random_stream(rng, w.base, 150):
            e.apply_event(ev)  # audit=True raises on any drift
        e.partition.audit(e.graph.adj)


def test_locality_of_edge_events(rng):
    for _ in range(10):
        w = gen_dynamic(GenConfig(n=60, k=4, mu=0.3, avg_degree=6, steps=0, seed=rng.randrange(10**6)))
        e = DyPermEngine(w.base.copy(), Partition(w.truth[0]))
        for ev in random_stream(rng, w.base, 100):
            if not ev.is_edge:
                e.apply_event(ev)
                continue
            pre = e.partition.copy()
            zone = pre.members[pre.community(ev.u)] | pre.members[pre.community(ev.v)]
            e.apply_event(ev)
            for x in pre.assignment:
                if x not in zone:
                    # untouched nodes keep their community label exactly
                    assert e.partition.community(x) == pre.community(x)


def test_monotone_acceptance(rng):
    checked = 0
    for _ in range(10):
        w = gen_dynamic(GenConfig(n=60, k=4, mu=0.3, avg_degree=6, steps=0, seed=rng.randrange(10**6)))
        e = DyPermEngine(w.base.copy(), Partition(w.truth[0]))
        for ev in random_stream(rng, w.base, 100):
            if ev.kind != NEW_EDGE or e.partition.community(ev.u) == e.partition.community(ev.v):
                e.apply_event(ev)
                continue
            cu, cv = e.partition.community(ev.u), e.partition.community(ev.v)
            g_after = e.graph.copy()
            g_after.add_edge(ev.u, ev.v)
            p_before = e.partition.copy()
            before = sum(community_perm_sum(g_after, p_before, c) for c in (cu, cv))
            s = e.apply_event(ev)
            after = sum(
                community_perm_sum(e.graph, e.partition, c) for c in (cu, cv) if c in e.partition.members
            )
            if s.moved:
                checked += 1
                assert after > before + 1e-12
                assert len({m[0] for m in s.moved}) == len(s.moved)  # each node moves once
            else:
                assert e.partition == p_before
    assert checked > 0


def test_intra_additions_never_change_partition(rng):
    for _ in range(50):
        w = gen_dynamic(GenConfig(n=40, k=3, mu=0.2, avg_degree=5, steps=0, seed=rng.randrange(10**6)))
        e = DyPermEngine(w.base, static_maximize(w.base))
        for c, members in list(e.partition.members.items()):
            cand = [(a, b) for a, b in itertools.combinations(sorted(members), 2) if not e.graph.has_edge(a, b)]
            if cand:
                before = dict(e.partition.assignment)
                e.handle_edge_addition(*rng.choice(cand))
                assert e.partition.assignment == before
                break


def test_audit_failure_detected():
    e = engine(TRI_A, {0: 0, 1: 0, 2: 0})
    e._total += 1.0
    with pytest.raises(AuditFailure):
        e.check_consistency()


def test_maintained_total_matches_oracle(rng):
    w = gen_dynamic(GenConfig(n=30, k=3, mu=0.3, avg_degree=5, steps=4, churn=0.1, seed=11))
    e = DyPermEngine(w.base.copy(), Partition(w.truth[0]))
    for ev in w.events:
        e.apply_event(ev)
    expect = graph_perm_oracle(e.graph.nodes(), e.graph.edges(), e.partition.assignment)
    assert e.graph_perm == pytest.approx(float(expect), abs=1e-9)
    assert graph_perm(e.graph, e.partition).graph_perm == pytest.approx(float(expect), abs=1e-12)
