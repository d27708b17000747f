"""Random instance generators shared by the unit and acceptance tests."""
import math

import numpy as np

from pcompacta.arcs import OrientedPolyArc, VeeError, vee
from pcompacta.geometry import PlanarComplex, PolyArc, is_simple


def random_polyline(rng, start, nseg, scale=1.0, center=None, tries=200):
    """Simple polyline from ``start`` with ``nseg`` random segments."""
    center = start if center is None else center
    for _ in range(tries):
        pts = [tuple(start)]
        for _ in range(nseg):
            pts.append(tuple(np.asarray(center) + scale * rng.uniform(-1, 1, 2)))
        if is_simple(pts):
            return OrientedPolyArc(PolyArc(tuple(pts)))
    raise RuntimeError("could not sample a simple polyline")


def random_chain(rng, length):
    """Endpoint-chained arcs: each one starts where the previous one ends."""
    arcs = [random_polyline(rng, rng.uniform(-1, 1, 2), int(rng.integers(1, 4)))]
    while len(arcs) < length:
        nxt = random_polyline(rng, arcs[-1].e1, int(rng.integers(1, 4)), center=(0, 0))
        if math.dist(nxt.e1, arcs[0].e0) > 1e-6:
            arcs.append(nxt)
    return arcs


def random_shrinking_chain(rng, tol=1e-6, ratio=0.8):
    """Chained arcs with diam(I_n) <= ratio**n converging to a random limit point.

    Candidate arcs with segments shorter than a tenth of their scale, or that
    would join the running fold only through a tolerance-level collision, are
    resampled: such inputs are outside the tolerance contract.
    """
    b = tuple(rng.uniform(-1, 1, 2))
    arcs = []
    start = tuple(np.asarray(b) + 0.3 * rng.uniform(-1, 1, 2) / math.sqrt(2))
    acc = None
    n = 0
    while True:
        r = 0.3 * ratio ** n / math.sqrt(2)
        if 2 * r * math.sqrt(2) <= tol / 2:
            break
        arc = random_polyline(rng, start, int(rng.integers(1, 4)), scale=r, center=b)
        # the next arc lives in the smaller box, so end there
        end = tuple(np.asarray(b) + r * ratio * rng.uniform(-1, 1, 2))
        pts = list(arc.points[:-1]) + [end]
        if any(math.dist(pts[k], pts[k + 1]) < 0.1 * r for k in range(len(pts) - 1)):
            continue
        if not is_simple(pts):
            continue
        cand = OrientedPolyArc(PolyArc(tuple(pts)))
        if acc is not None:
            try:
                nxt = vee(acc, cand)
            except VeeError:
                continue
        else:
            nxt = cand
        acc = nxt
        arcs.append(cand)
        start = end
        n += 1
    return arcs, b


def random_complex(rng, npts, nseg):
    pts = [tuple(np.round(rng.uniform(0, 1, 2), 3)) for _ in range(npts)]
    segs = []
    for _ in range(nseg):
        i, j = rng.choice(npts, 2, replace=False)
        if pts[i] != pts[j]:
            segs.append((pts[i], pts[j]))
    return PlanarComplex.from_segments(segs, points=pts[:1])


def random_planar_graph(rng, n, extra):
    """Connected straight-line graph: random spanning tree of a Delaunay
    triangulation plus ``extra`` further Delaunay edges."""
    from scipy.spatial import Delaunay

    from pcompacta.metric import EmbeddedGraph, UnionFind
    pts = rng.uniform(0, 1, (n, 2))
    tri = Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        for a in range(3):
            i, j = sorted((int(simplex[a]), int(simplex[(a + 1) % 3])))
            edges.add((i, j))
    edges = sorted(edges)
    order = rng.permutation(len(edges))
    uf = UnionFind(n)
    chosen, rest = [], []
    for k in order:
        i, j = edges[k]
        if uf.find(i) != uf.find(j):
            uf.union(i, j)
            chosen.append((i, j))
        else:
            rest.append((i, j))
    chosen += rest[:extra]
    return EmbeddedGraph(tuple(map(tuple, pts)), tuple(sorted(chosen)))
