import math
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixedmoore import catalog
from mixedmoore.graph import (GraphError, GraphParseError, InvalidGeneratorSet, MixedGraph,
                              SizeCapExceeded, diameter, format_graph, from_cayley,
                              isomorphic, kautz, parse_graph, transpose, verify_moore,
                              walk_count_ok)

from oracles import brute_walk_counts


def cycle(n):
    return MixedGraph(n, frozenset((i, (i + 1) % n) for i in range(n)), frozenset())


def dicycle(n):
    return MixedGraph(n, frozenset(), frozenset((i, (i + 1) % n) for i in range(n)))


def to_nx(g):
    D = nx.DiGraph()
    D.add_nodes_from(range(g.n))
    for u, v in g.edges:
        D.add_edge(u, v, kind="E")
        D.add_edge(v, u, kind="E")
    for u, v in g.arcs:
        D.add_edge(u, v, kind="A")
    return D


def nx_isomorphic(g, h):
    return nx.is_isomorphic(to_nx(g), to_nx(h), edge_match=lambda a, b: a["kind"] == b["kind"])


@st.composite
def mixed_graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    kinds = draw(st.lists(st.sampled_from("NEAB"), min_size=len(pairs), max_size=len(pairs)))
    edges = {p for p, k in zip(pairs, kinds) if k == "E"}
    arcs = {p for p, k in zip(pairs, kinds) if k == "A"} | \
        {(v, u) for (u, v), k in zip(pairs, kinds) if k == "B"}
    return MixedGraph(n, frozenset(edges), frozenset(arcs))


def random_relabel(g, rng):
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


# --- invariants of the type -----------------------------------------------------------

def test_rejects_digon_loop_and_overlap():
    with pytest.raises(GraphError):
        MixedGraph(2, frozenset(), frozenset({(0, 1), (1, 0)}))
    with pytest.raises(GraphError):
        MixedGraph(2, frozenset({(0, 0)}), frozenset())
    with pytest.raises(GraphError):
        MixedGraph(2, frozenset({(0, 1)}), frozenset({(1, 0)}))
    with pytest.raises(GraphError):
        MixedGraph(2, frozenset({(0, 2)}), frozenset())


# --- Cayley construction -----------------------------------------------------------

def test_cayley_six_cycle():
    g = from_cayley(catalog.cyclic(6), {1, 5}, set())
    assert g == cycle(6)


def test_cayley_directed_triangle():
    assert from_cayley(catalog.cyclic(3), set(), {1}) == dicycle(3)


def test_cayley_s3_transpositions_is_k33():
    S3 = catalog.symmetric(3)
    trans = [g for g in range(6) if S3.element_orders[g] == 2]
    g = from_cayley(S3, trans, set())
    even = {0} | {x for x in range(6) if S3.element_orders[x] == 3}
    # every edge joins the even and odd permutations, and all 9 such pairs occur
    assert len(g.edges) == 9
    assert all((u in even) != (v in even) for u, v in g.edges)
    assert nx_isomorphic(g, MixedGraph(6, frozenset((i, j) for i in range(3) for j in range(3, 6)),
                                       frozenset()))


@pytest.mark.parametrize("S1,S2,msg", [
    ({0}, set(), "identity"),
    ({1}, set(), "inverse-closed"),
    (set(), {1, 5}, "inverse-free"),
    ({1, 5}, {1}, "overlap"),
    (set(), {3}, "inverse-free"),  # involution in S2
])
def test_cayley_invalid(S1, S2, msg):
    with pytest.raises(InvalidGeneratorSet, match=msg):
        from_cayley(catalog.cyclic(6), S1, S2)


def random_generating_set(G, rng, r_max=4, z_max=3):
    elems = list(range(1, G.order))
    rng.shuffle(elems)
    S1, S2 = set(), set()
    for g in elems:
        gi = int(G.inverses[g])
        if g in S1 or g in S2 or gi in S2:
            continue
        if len(S1) + (1 if gi == g else 2) <= r_max and rng.random() < 0.5:
            S1 |= {g, gi}
        elif gi != g and gi not in S1 and len(S2) < z_max:
            S2.add(g)
    return S1, S2


def small_group_pool():
    return [G for n in (6, 12, 18, 20) for G in catalog.catalog_for_order(n)]


def test_cayley_degrees_and_diameter_criterion():
    rng = random.Random(7)
    pool = small_group_pool()
    for _ in range(150):
        G = rng.choice(pool)
        S1, S2 = random_generating_set(G, rng)
        g = from_cayley(G, S1, S2)
        assert all(len(x) == len(S1) for x in g.undirected_neighbors)
        assert all(len(x) == len(S2) for x in g.out_neighbors)
        assert all(len(x) == len(S2) for x in g.in_neighbors)
        S = S1 | S2
        reach = {0} | S | {G.rows[a][b] for a in S for b in S}
        assert (diameter(g) <= 2) == (len(reach) == G.order)


# --- Kautz ------------------------------------------------------------------------

def test_kautz_two_matches_figure():
    g = kautz(2)
    assert g.n == 6 and len(g.edges) == 3 and len(g.arcs) == 6
    lab = {l: i for i, l in enumerate(g.labels)}
    # thick edges ac-ca, cb-bc, ba-ab and arrows of the drawn figure
    assert {frozenset(e) for e in g.edges} == {frozenset((lab[a], lab[b])) for a, b in
                                              [("ac", "ca"), ("cb", "bc"), ("ba", "ab")]}
    arrows = [("ac", "cb"), ("cb", "ba"), ("bc", "ca"), ("ba", "ac"), ("ab", "bc"), ("ca", "ab")]
    assert g.arcs == {(lab[a], lab[b]) for a, b in arrows}


def test_kautz_counts():
    assert kautz(3).n == 12
    g = kautz(4)
    assert g.n == 20
    assert all(len(x) == 1 for x in g.undirected_neighbors)
    assert all(len(x) == 3 for x in g.out_neighbors)


@pytest.mark.parametrize("d", range(2, 11))
def test_kautz_is_moore(d):
    g = kautz(d)
    rep = verify_moore(g)
    assert rep.verdict and g.n == d * (d + 1)
    assert rep.degree_profile == (1, d - 1, d - 1)


def test_kautz_domain():
    with pytest.raises(GraphError):
        kautz(1)


# --- verifier ----------------------------------------------------------------------

def test_verify_kautz_two():
    rep = verify_moore(kautz(2))
    assert rep.verdict and rep.degree_profile[:2] == (1, 1) and rep.diameter == 2


def test_verify_six_cycle():
    rep = verify_moore(cycle(6))
    assert not rep.verdict and rep.diameter == 3 and not rep.order_ok


def test_verify_directed_triangle():
    g = dicycle(3)
    W = brute_walk_counts(g)
    assert all(W[u][v] == 1 for u in range(3) for v in range(3) if u != v)
    assert all(W[u][u] == 0 for u in range(3))
    rep = verify_moore(g)
    # counts work out, but with no undirected edge it is not a mixed graph
    assert rep.degree_profile == (0, 1, 1) and not rep.degree_ok
    assert rep.order_ok and rep.unique_path_ok and rep.triangle_ok and rep.diameter == 2
    assert not rep.verdict


def test_verify_petersen_not_mixed():
    P = nx.petersen_graph()
    g = MixedGraph(10, frozenset(P.edges()), frozenset())
    rep = verify_moore(g)
    assert rep.unique_path_ok and rep.girth_ok and not rep.verdict


def corpus():
    out = [kautz(d) for d in (2, 3, 4)] + [cycle(n) for n in (3, 4, 5, 6)] + [dicycle(3), dicycle(5)]
    out.append(MixedGraph(4, frozenset((i, j) for i in range(4) for j in range(i + 1, 4)), frozenset()))
    rng = random.Random(3)
    pool = small_group_pool()
    for _ in range(40):
        G = rng.choice(pool)
        out.append(from_cayley(G, *random_generating_set(G, rng)))
    # the order-18 Moore graph and a few perturbations of it
    C3S3 = catalog.catalog_for_order(18).groups[3]
    out.append(from_cayley(C3S3, (1, 8, 14), (3,)))
    out.append(transpose(out[-1]))
    return out


@pytest.mark.parametrize("g", corpus())
def test_walk_count_matches_enumeration(g):
    assert g.n <= 30
    W = brute_walk_counts(g)
    r = len(g.undirected_neighbors[0])
    brute = all(W[u][v] == (r if u == v else 1) for u in range(g.n) for v in range(g.n))
    assert walk_count_ok(g, r) == brute
    A = g.adjacency()
    assert (A + A @ A).tolist() == W


@settings(max_examples=100, deadline=None)
@given(mixed_graphs(max_n=9))
def test_walk_count_random(g):
    W = brute_walk_counts(g)
    A = g.adjacency()
    assert (A + A @ A).tolist() == W


def test_verify_invariance_randomized():
    rng = random.Random(11)
    moore = [kautz(d) for d in (2, 3, 4, 5)]
    C3S3 = catalog.catalog_for_order(18).groups[3]
    moore.append(from_cayley(C3S3, (1, 8, 14), (3,)))
    pool = small_group_pool()
    for i in range(100):
        if i % 2:
            g = rng.choice(moore)
        else:
            G = rng.choice(pool)
            g = from_cayley(G, *random_generating_set(G, rng))
        v = verify_moore(g).verdict
        assert verify_moore(random_relabel(g, rng)).verdict == v
        assert verify_moore(transpose(g)).verdict == v
        if i % 2:
            assert v


# --- diameter / transpose -------------------------------------------------------------

def test_diameter_examples():
    K4 = MixedGraph(4, frozenset((i, j) for i in range(4) for j in range(i + 1, 4)), frozenset())
    assert diameter(K4) == 1
    assert diameter(kautz(3)) == 2
    assert math.isinf(diameter(MixedGraph(2, frozenset(), frozenset())))
    # one-way path is not strongly connected
    assert math.isinf(diameter(MixedGraph(2, frozenset(), frozenset({(0, 1)}))))


@settings(max_examples=50, deadline=None)
@given(mixed_graphs(max_n=8))
def test_diameter_matches_networkx(g):
    D = to_nx(g)
    if nx.is_strongly_connected(D):
        assert diameter(g) == max(max(d.values()) for _, d in nx.all_pairs_shortest_path_length(D))
    else:
        assert math.isinf(diameter(g))


def test_transpose_examples():
    assert transpose(cycle(5)) == cycle(5)
    t = transpose(dicycle(3))
    assert t.arcs == {(1, 0), (2, 1), (0, 2)}
    assert verify_moore(transpose(kautz(2))).verdict
    assert transpose(transpose(kautz(3))) == kautz(3)


# --- isomorphism ----------------------------------------------------------------------

def test_isomorphic_examples():
    rng = random.Random(5)
    g = kautz(3)
    assert isomorphic(g, random_relabel(g, rng))
    k, t = kautz(2), transpose(kautz(2))
    assert isomorphic(k, t) == isomorphic(t, k)
    tri = MixedGraph(3, frozenset({(0, 1), (1, 2), (0, 2)}), frozenset())
    assert not isomorphic(dicycle(3), tri)


def test_isomorphic_cap():
    with pytest.raises(SizeCapExceeded):
        isomorphic(kautz(15), kautz(15))


@settings(max_examples=150, deadline=None)
@given(mixed_graphs(max_n=7), mixed_graphs(max_n=7))
def test_isomorphic_matches_networkx(g, h):
    assert isomorphic(g, h) == nx_isomorphic(g, h)


@settings(max_examples=40, deadline=None)
@given(mixed_graphs(max_n=9), st.randoms(use_true_random=False))
def test_isomorphic_relabel_random(g, rnd):
    assert isomorphic(g, random_relabel(g, rnd))


def test_isomorphic_cayley_cross_check():
    rng = random.Random(9)
    pool = small_group_pool()
    graphs = []
    for _ in range(30):
        G = rng.choice([G for G in pool if G.order == 12])
        graphs.append(from_cayley(G, *random_generating_set(G, rng, 3, 2)))
    for a in graphs[:12]:
        for b in graphs[:12]:
            assert isomorphic(a, b) == nx_isomorphic(a, b)


# --- files -----------------------------------------------------------------------------

def test_graph_file_roundtrip_bit_exact():
    for g in (kautz(2), kautz(5), cycle(4), dicycle(3)):
        text = format_graph(g)
        assert format_graph(parse_graph(text)) == text
        assert parse_graph(text) == MixedGraph(g.n, g.edges, g.arcs)


def test_graph_file_layout():
    assert format_graph(kautz(2)).splitlines()[0] == "6 1 1"
    text = format_graph(dicycle(3))
    assert text == "3 0 1\nA 0 1\nA 1 2\nA 2 0\n"


def test_graph_file_comments():
    g = parse_graph("# a triangle\n3 0 1\nA 0 1 # first\n\nA 1 2\nA 2 0\n")
    assert g == dicycle(3)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("3 0\n", 1),
    ("3 0 1\nA 0 1\nA 1\n", 3),
    ("3 0 1\nX 0 1\n", 2),
    ("3 0 1\nA 0 7\n", 2),
    ("3 0 1\nA 0 x\n", 2),
])
def test_graph_file_errors(text, line):
    with pytest.raises(GraphParseError) as exc:
        parse_graph(text)
    assert exc.value.line == line
