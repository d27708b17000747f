import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import MultiLineString
from shapely.ops import unary_union

from helpers import random_complex, random_planar_graph
from pcompacta.constructions import becker_R, becker_set, comb_P, comb_nodes, node_name, FiniteTree, \
    TruncationParams
from pcompacta.geometry import PlanarComplex
from pcompacta.metric import (DeltaBudgetExceeded, EmbeddedGraph, arc_components, canonical_lifting,
                              delta, delta_ball, delta_oracle, eps_components, induced_connected,
                              make_witness, min_path_length, planarize, shortest_path, star_lift)


def graph(points, edges):
    return EmbeddedGraph(tuple(points), tuple(edges))


def nx_graph(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def shapely_noding(c, tol=1e-9):
    """Vertex and edge counts of the noded arrangement, clustering nodes within tol."""
    lines = [[c.points[i], c.points[j]] for i, j in c.segments]
    pieces = unary_union(MultiLineString(lines))
    geoms = getattr(pieces, "geoms", [pieces])
    reps = []

    def rep(p):
        for k, q in enumerate(reps):
            if math.dist(p, q) <= tol:
                return k
        reps.append(p)
        return len(reps) - 1

    edges = set()
    for g in geoms:
        cs = list(g.coords)
        for a, b in zip(cs, cs[1:]):
            u, v = rep(a), rep(b)
            if u != v:
                edges.add((min(u, v), max(u, v)))
    for p in c.points:
        rep(p)
    return len(reps), len(edges)


def test_planarize_two_crossing_segments():
    g = planarize(PlanarComplex.from_segments([((0, 0), (2, 0)), ((1, -1), (1, 1))]))
    assert g.n == 5 and len(g.edges) == 4


def test_planarize_idempotent():
    g = planarize(PlanarComplex.from_segments([((0, 0), (2, 0)), ((1, -1), (1, 1)), ((0, 0), (0, 1))]))
    again = planarize(g.to_complex())
    assert again.vertices == g.vertices and again.edges == g.edges


def test_planarize_becker_R_counts():
    c = becker_R((), 3)
    assert (len(c.points), len(c.segments)) == (12, 10)
    g = planarize(c)
    assert (g.n, len(g.edges)) == shapely_noding(c) == (12, 10)


def test_planarize_merges_bottom_overlap():
    c = becker_set(FiniteTree.from_nodes([(0,)]), TruncationParams(1, 1))
    g = planarize(c)
    assert (g.n, len(g.edges)) == shapely_noding(c)


@given(st.integers(0, 2**32 - 1))
def test_planarize_matches_shapely_noding(seed):
    c = random_complex(np.random.default_rng(seed), 6, 5)
    g = planarize(c)
    assert (g.n, len(g.edges)) == shapely_noding(c)


def test_planarize_keeps_labels():
    c = PlanarComplex.from_segments([((0, 0), (2, 0))], labels={"mid": (1, 0), "end": (2, 0)})
    g = planarize(c)
    assert g.vertices[g.labels["mid"]] == (1, 0)
    assert g.n == 3 and len(g.edges) == 2


def test_components_examples():
    tri = [((0, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 1), (0, 0))]
    other = [((p[0] + 5, p[1]), (q[0] + 5, q[1])) for p, q in tri]
    assert len(arc_components(planarize(PlanarComplex.from_segments(tri + other)))) == 2
    assert arc_components(EmbeddedGraph((), ())) == []


@given(st.integers(0, 2**32 - 1))
def test_components_match_networkx(seed):
    g = planarize(random_complex(np.random.default_rng(seed), 8, 5))
    ours = sorted(tuple(c) for c in arc_components(g))
    theirs = sorted(tuple(sorted(c)) for c in nx.connected_components(nx_graph(g)))
    assert ours == theirs


def test_delta_single_edge():
    g = graph([(0, 0), (3, 4)], [(0, 1)])
    assert delta(g, 0, 1).value == 5.0


def test_delta_prefers_low_route():
    # x=(0,0), y=(2,0); high route via (1,2) has diameter sqrt(5)
    g = planarize(PlanarComplex.from_segments([((0, 0), (1, 2)), ((1, 2), (2, 0)),
                                               ((0, 0), (1, 0)), ((1, 0), (2, 0))]))
    x, y = g.vertex((0, 0)), g.vertex((2, 0))
    res = delta(g, x, y)
    assert res.value == 2.0
    assert g.path_points(res.witness.vertices) == ((0, 0), (1, 0), (2, 0))
    assert delta_oracle(g, x, y).value == 2.0


def test_delta_disconnected_is_inf():
    g = graph([(0, 0), (1, 0), (5, 5), (6, 5)], [(0, 1), (2, 3)])
    res = delta(g, 0, 3)
    assert res.value == math.inf and res.witness is None
    assert delta_oracle(g, 0, 3).value == math.inf


def test_delta_unknown_vertex():
    g = graph([(0, 0), (1, 0)], [(0, 1)])
    with pytest.raises(KeyError):
        delta(g, 0, 7)


def test_delta_budget(monkeypatch):
    g = random_planar_graph(np.random.default_rng(3), 20, 15)
    x, y, full = max(((x, y, delta(g, x, y)) for x, y in itertools.combinations(range(g.n), 2)),
                     key=lambda t: t[2].expanded)
    assert full.expanded >= 2
    with pytest.raises(DeltaBudgetExceeded, match="budget exceeded"):
        delta(g, x, y, budget=full.expanded - 1)
    assert delta(g, x, y, budget=full.expanded).value == full.value
    monkeypatch.setenv("PC_NODE_BUDGET", str(full.expanded - 1))
    with pytest.raises(DeltaBudgetExceeded):
        delta(g, x, y)


def nx_delta(g, x, y):
    """Independent oracle: enumerate paths with networkx, diameters with math.dist."""
    best = math.inf
    for p in nx.all_simple_paths(nx_graph(g), x, y):
        pts = [g.vertices[v] for v in p]
        best = min(best, max(math.dist(a, b) for a, b in itertools.combinations(pts, 2)))
    return best


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_delta_matches_oracles(seed):
    g = planarize(random_complex(np.random.default_rng(seed), 6, 6))
    if g.n > 12:
        return
    for x, y in itertools.combinations(range(g.n), 2):
        a, b = delta(g, x, y), delta_oracle(g, x, y)
        assert a.value == b.value
        if math.isfinite(a.value):
            assert a.witness.diam == b.witness.diam == a.value
            assert a.value == pytest.approx(nx_delta(g, x, y), abs=1e-12)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_delta_axioms(seed):
    g = random_planar_graph(np.random.default_rng(seed), 12, 6)
    d = [[delta(g, x, y).value for y in range(g.n)] for x in range(g.n)]
    for x, y in itertools.product(range(g.n), repeat=2):
        assert d[x][y] >= math.dist(g.vertices[x], g.vertices[y])
        assert d[x][y] == d[y][x]
    for x, y, z in itertools.product(range(g.n), repeat=3):
        assert d[x][z] <= d[x][y] + d[y][z] + 1e-12


def test_witness_diameter_is_intrinsic():
    g = random_planar_graph(np.random.default_rng(5), 14, 8)
    w = delta(g, 0, 13).witness
    path = EmbeddedGraph(g.path_points(w.vertices), tuple((k, k + 1) for k in range(len(w.vertices) - 1)))
    inner = max(delta(path, a, b).value for a, b in itertools.combinations(range(path.n), 2))
    assert inner == w.diam


def test_delta_ball_examples():
    line = graph([(0, 0), (1, 0), (2, 0), (3, 0)], [(0, 1), (1, 2), (2, 3)])
    # three delta queries: 1, 2, 3
    assert [delta(line, 0, v).value for v in (1, 2, 3)] == [1, 2, 3]
    assert delta_ball(line, 0, 1.5) == {0, 1}
    assert delta_ball(line, 0, 4 + 1) == {0, 1, 2, 3}
    assert delta_ball(line, 0, 0.5) == {0}


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 1.0))
def test_delta_balls_connected(seed, r):
    g = random_planar_graph(np.random.default_rng(seed), 12, 5)
    for x in range(g.n):
        ball = delta_ball(g, x, r)
        assert x in ball and induced_connected(g, ball)
        for v in ball:
            assert set(delta(g, x, v).witness.vertices) <= ball


def test_eps_components_examples():
    two = PlanarComplex.from_segments([((0, 0), (1, 0)), ((0, 0.5), (1, 0.5))])
    assert len(eps_components(two, 0.6, 0.15)) == 1
    assert len(eps_components(two, 0.4, 0.1)) == 2
    with pytest.raises(ValueError):
        eps_components(two, 0.4, 0.2)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_eps_components_becker_gap(N):
    c = becker_set(FiniteTree.root_only(), TruncationParams(1, N))
    gap = 2 * 4.0 ** -(N + 1)
    assert len(eps_components(c, 3 * 4.0 ** -(N + 1), 0.75 * 4.0 ** -(N + 1))) == 1
    assert len(eps_components(c, gap / 2, gap / 8)) == 2


def test_min_path_length_examples():
    assert min_path_length(graph([(0, 0), (3, 4)], [(0, 1)]), 0, 1) == 5
    sq = graph([(0, 0), (0, 1), (1, 0), (1, 1)], [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert min_path_length(sq, 0, 3) == 2
    assert min_path_length(graph([(0, 0), (1, 0), (5, 5)], [(0, 1)]), 0, 2) == math.inf


def test_min_path_length_comb_bound():
    g = planarize(comb_P(3, 2))
    root = g.labels["a_hat_root"]
    for s in comb_nodes(3, 2):
        if len(s) == 3:
            assert min_path_length(g, root, g.labels[f"b_hat_{node_name(s)}"]) >= 2 / 3 * 4


@given(st.integers(0, 2**32 - 1))
def test_shortest_path_matches_networkx(seed):
    g = random_planar_graph(np.random.default_rng(seed), 15, 10)
    h = nx_graph(g)
    for u, v in g.edges:
        h[u][v]["w"] = g.edge_length(u, v)
    lengths = nx.single_source_dijkstra_path_length(h, 0, weight="w")
    for v, L in lengths.items():
        assert min_path_length(g, 0, v) == pytest.approx(L, abs=1e-12)


def test_star_lift_examples():
    star = graph([(0, 0), (1, 0), (0, 1), (-1, 0)], [(0, 1), (0, 2), (0, 3)])
    lift = star_lift(star, 0)
    assert lift[0].vertices == (0,)
    assert all(lift[v].vertices == (0, v) for v in (1, 2, 3))
    sq = graph([(0, 0), (0, 1), (1, 0), (1, 1)], [(0, 1), (0, 2), (1, 3), (2, 3)])
    # both sides have length 2; the lexicographically smaller vertex path wins
    assert star_lift(sq, 0)[3].vertices == (0, 1, 3)
    assert star_lift(sq, 0) == star_lift(sq, 0)


def test_canonical_lifting_joins_star_paths():
    g = random_planar_graph(np.random.default_rng(11), 15, 6)
    lift = star_lift(g, 0)
    arc = canonical_lifting(g, lift, 4, 9)
    assert arc.e0 == g.vertices[4] and arc.e1 == g.vertices[9]
    used = {g.vertices[v] for w in (lift[4], lift[9]) for v in w.vertices}
    assert set(arc.points) <= used
