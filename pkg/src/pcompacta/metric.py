"""Embedded graphs and the arc pseudo-metric.

``delta(G, x, y)`` is the least diameter of an x-y path in the embedded graph,
the finite counterpart of the infimum of diameters of arc-connected sets
containing both points.  Feasibility of "some path of diameter <= d" is not a
reachability question on a filtered graph (two vertices each close to both
anchors may still be far apart), so the search is an exact depth-first
branch-and-bound over simple paths.
"""
from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.spatial import cKDTree

from .arcs import OrientedPolyArc, flip, vee
from .geometry import (TOL, GeometryError, PlanarComplex, Point, PolyArc, Segment, near_pairs,
                       dist, point_segment_distance, project_param, seg_intersect)

DEFAULT_NODE_BUDGET = 10_000_000


class DeltaBudgetExceeded(RuntimeError):
    pass


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so classes are labelled deterministically
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class EmbeddedGraph:
    vertices: tuple
    edges: tuple
    labels: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.vertices)
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise GeometryError("self-loop in embedded graph")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GeometryError(f"duplicate edge {key}")
            seen.add(key)
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "lengths", tuple(dist(self.vertices[i], self.vertices[j])
                                                  for i, j in self.edges))
        object.__setattr__(self, "weights", tuple(tuple(dist(self.vertices[v], self.vertices[w]) for w in a)
                                                  for v, a in enumerate(self.adjacency)))
        object.__setattr__(self, "_rows", {})
        object.__setattr__(self, "_lists", {})
        object.__setattr__(self, "_bounds", {})

    @property
    def n(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_length(self, i: int, j: int) -> float:
        return self.weights[i][self.adjacency[i].index(j)]

    def dist_row(self, v: int) -> np.ndarray:
        """Euclidean distances from vertex ``v`` to every vertex (cached)."""
        row = self._rows.get(v)
        if row is None:
            # same primitive as geometry.dist, so delta >= dist holds exactly
            p = self.vertices[v]
            row = np.fromiter((dist(p, q) for q in self.vertices), dtype=float, count=self.n)
            if len(self._rows) < 4096:
                self._rows[v] = row
        return row

    def dist_list(self, v: int) -> list:
        """:meth:`dist_row` as a plain list (faster for short index lists)."""
        row = self._lists.get(v)
        if row is None:
            row = self.dist_row(v).tolist()
            if len(self._lists) < 4096:
                self._lists[v] = row
        return row

    def _coords(self) -> np.ndarray:
        c = self._rows.get("coords")
        if c is None:
            c = self._rows["coords"] = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        return c

    def vertex(self, ref, tol: float = TOL) -> int:
        """Resolve a label name, vertex index or coordinate pair to a vertex index."""
        if isinstance(ref, str):
            if ref not in self.labels:
                raise KeyError(f"unknown label {ref!r}")
            return self.labels[ref]
        if isinstance(ref, (int, np.integer)):
            if not 0 <= ref < self.n:
                raise KeyError(f"no vertex {ref}")
            return int(ref)
        d, i = cKDTree(self._coords()).query(np.asarray(ref, dtype=float))
        if d > tol:
            raise KeyError(f"no vertex within tolerance of {tuple(ref)}")
        return int(i)

    def path_points(self, path) -> tuple:
        return tuple(self.vertices[v] for v in path)

    def to_complex(self) -> PlanarComplex:
        return PlanarComplex(self.vertices, self.edges, dict(self.labels))


class _PointIndex:
    """Registers points, identifying any two closer than ``tol``."""

    def __init__(self, tol: float):
        self.tol = tol
        self.cell = 4 * tol
        self.grid: dict[tuple, list[int]] = {}
        self.points: list[Point] = []

    def add(self, p) -> int:
        cx, cy = math.floor(p[0] / self.cell), math.floor(p[1] / self.cell)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for i in self.grid.get((cx + dx, cy + dy), ()):
                    if dist(self.points[i], p) <= self.tol:
                        return i
        i = len(self.points)
        self.points.append(Point(float(p[0]), float(p[1])))
        self.grid.setdefault((cx, cy), []).append(i)
        return i


def planarize(c: PlanarComplex, tol: float = TOL) -> EmbeddedGraph:
    """Split every segment at all intersection points and deduplicate edges.

    Vertices of the result are sorted lexicographically by coordinates.
    """
    index = _PointIndex(tol)
    pid = [index.add(p) for p in c.points]
    coords = c.segment_coords()
    segs = [Segment(c.points[i], c.points[j]) for i, j in c.segments]
    splits: list[list[int]] = [[pid[i], pid[j]] for i, j in c.segments]
    for a, b in near_pairs(coords, tol=tol):
        hit = seg_intersect(segs[a], segs[b], tol)
        for p in hit.points:
            v = index.add(p)
            splits[a].append(v)
            splits[b].append(v)
    # points (isolated or labelled) lying on a segment interior split it too
    if len(c.points) and len(segs):
        pts = np.asarray(c.points, dtype=float)
        dots = np.stack([pts, pts], axis=1)
        for k, s in near_pairs(dots, coords, tol):
            p = c.points[k]
            if point_segment_distance(p, segs[s].p, segs[s].q) <= tol:
                splits[s].append(pid[k])
    edges = set()
    for s, vids in zip(segs, splits):
        order = sorted(set(vids), key=lambda v: project_param(index.points[v], s.p, s.q))
        for u, w in zip(order, order[1:]):
            if u != w:
                edges.add((min(u, w), max(u, w)))
    # canonical vertex numbering
    perm = sorted(range(len(index.points)), key=lambda v: index.points[v])
    rank = {v: r for r, v in enumerate(perm)}
    verts = tuple(index.points[v] for v in perm)
    new_edges = tuple(sorted((min(rank[u], rank[w]), max(rank[u], rank[w])) for u, w in edges))
    labels = {name: rank[pid[i]] for name, i in sorted(c.labels.items())}
    return EmbeddedGraph(verts, new_edges, labels)


def arc_components(g: EmbeddedGraph) -> list[list[int]]:
    uf = UnionFind(g.n)
    for i, j in g.edges:
        uf.union(i, j)
    return uf.groups() if g.n else []


def component_of(g: EmbeddedGraph) -> list[int]:
    """Component id for every vertex (ids follow :func:`arc_components` order)."""
    comp = [0] * g.n
    for k, group in enumerate(arc_components(g)):
        for v in group:
            comp[v] = k
    return comp


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple
    length: float
    diam: float


@dataclass(frozen=True)
class DeltaResult:
    value: float
    witness: PathWitness | None
    expanded: int = 0

    @property
    def finite(self) -> bool:
        return self.witness is not None


def path_diameter(g: EmbeddedGraph, path) -> float:
    best = 0.0
    for k in range(1, len(path)):
        row = g.dist_row(path[k])
        best = max(best, float(row[list(path[:k])].max()))
    return best


def make_witness(g: EmbeddedGraph, path) -> PathWitness:
    path = tuple(int(v) for v in path)
    length = sum(g.edge_length(path[k], path[k + 1]) for k in range(len(path) - 1))
    return PathWitness(path, length, path_diameter(g, path))


def shortest_path(g: EmbeddedGraph, x: int, y: int) -> PathWitness | None:
    """Dijkstra by total edge length; ties resolved toward smaller vertex indices."""
    tree = _dijkstra(g, x, y)
    if y not in tree:
        return None
    return make_witness(g, tree[y])


def min_path_length(g: EmbeddedGraph, x: int, y: int) -> float:
    w = shortest_path(g, x, y)
    return math.inf if w is None else w.length


def _dijkstra(g: EmbeddedGraph, src: int, target: int | None = None) -> dict[int, tuple]:
    """Shortest-path tree from ``src`` (stops early once ``target`` is settled)."""
    dist_to = {src: 0.0}
    parent: dict[int, int | None] = {src: None}
    done = set()
    heap = [(0.0, src)]

    def route(v):
        out = []
        while v is not None:
            out.append(v)
            v = parent[v]
        return out[::-1]

    while heap:
        d, u = heapq.heappop(heap)
        if u in done or d > dist_to[u]:
            continue
        done.add(u)
        if u == target:
            return {u: tuple(route(u))}
        for v, w in zip(g.adjacency[u], g.weights[u]):
            if v in done:
                continue
            nd = d + w
            old = dist_to.get(v)
            if old is None or nd < old - 1e-12:
                dist_to[v], parent[v] = nd, u
                heapq.heappush(heap, (nd, v))
            elif abs(nd - old) <= 1e-12 and route(u) + [v] < route(v):
                # float sums of equal-length routes may differ in the last ulp;
                # such ties go to the lexicographically smaller vertex path
                parent[v] = u
                if nd < old:
                    dist_to[v] = nd
                    heapq.heappush(heap, (nd, v))
    if target is not None:
        return {}
    return {v: tuple(route(v)) for v in done}


def node_budget() -> int:
    env = os.environ.get("PC_NODE_BUDGET")
    if not env:
        return DEFAULT_NODE_BUDGET
    try:
        budget = int(env)
    except ValueError:
        budget = -1
    if budget < 0:
        raise ValueError(f"PC_NODE_BUDGET must be a nonnegative integer, got {env!r}")
    return budget


BOUND_MAX_VERTICES = 1500


def reach_bounds(g: EmbeddedGraph, y: int) -> np.ndarray | None:
    """Matrix M with M[p, v] = least, over v-y walks, of the largest distance
    from a walk vertex to p.

    Any path through p that continues from v to y has diameter >= M[p, v].
    Computed for all p at once by relaxing M[:, v] = max(d(p, v), min over
    neighbours w of M[:, w]).  Skipped (None) on large graphs.
    """
    if g.n > BOUND_MAX_VERTICES:
        return None
    hit = g._bounds.get(y)
    if hit is not None:
        return hit[0]
    n = g.n
    d = np.stack([g.dist_row(v) for v in range(n)])
    has = [v for v in range(n) if g.adjacency[v]]
    flat = np.fromiter((w for v in has for w in g.adjacency[v]), dtype=int)
    starts = np.cumsum([0] + [len(g.adjacency[v]) for v in has[:-1]])
    m = np.full((n, n), math.inf)
    m[:, y] = d[:, y]
    nb = np.full((n, n), math.inf)
    while True:
        nb[:, has] = np.minimum.reduceat(m[:, flat], starts, axis=1)
        new = np.maximum(d, nb)
        new[:, y] = d[:, y]
        if np.array_equal(new, m):
            break
        m = new
    if len(g._bounds) >= (64 if n <= 100 else 2):
        g._bounds.pop(next(iter(g._bounds)))
    g._bounds[y] = (m, m.T.tolist())
    return m


def delta(g: EmbeddedGraph, x: int, y: int, budget: int | None = None) -> DeltaResult:
    """Exact least path diameter between ``x`` and ``y`` by branch-and-bound."""
    x, y = g.vertex(x), g.vertex(y)
    if x == y:
        return DeltaResult(0.0, PathWitness((x,), 0.0, 0.0), 0)
    start = shortest_path(g, x, y)
    if start is None:
        return DeltaResult(math.inf, None, 0)
    budget = node_budget() if budget is None else budget
    best, best_path = start.diam, start.vertices
    dy = g.dist_list(y)
    m = reach_bounds(g, y)
    # every x-y path has diameter at least this
    floor = dy[x] if m is None else max(dy[x], float(m[x, x]))
    mt = None if m is None else g._bounds[y][1]
    path = [x]
    on_path = [False] * g.n
    on_path[x] = True
    diam_stack = [0.0]
    # largest distance from a path vertex to y: a lower bound for any completion
    fary_stack = [dy[x]]
    iters = [iter(g.adjacency[x])]
    expanded = 0
    while iters and best > floor:
        v = next(iters[-1], None)
        if v is None:
            iters.pop()
            on_path[path.pop()] = False
            diam_stack.pop()
            fary_stack.pop()
            continue
        if on_path[v]:
            continue
        if max(diam_stack[-1], fary_stack[-1], dy[v]) >= best:
            continue
        row = g.dist_list(v)
        nd = max(diam_stack[-1], max(map(row.__getitem__, path)))
        if nd >= best:
            continue
        if v != y and mt is not None:
            col = mt[v]
            if max(col[v], max(map(col.__getitem__, path))) >= best:
                continue
        expanded += 1
        if expanded > budget:
            raise DeltaBudgetExceeded(f"budget exceeded after {budget} expanded nodes")
        if v == y:
            best, best_path = nd, tuple(path) + (y,)
            continue
        path.append(v)
        on_path[v] = True
        diam_stack.append(nd)
        fary_stack.append(max(fary_stack[-1], dy[v]))
        iters.append(iter(g.adjacency[v]))
    return DeltaResult(best, make_witness(g, best_path), expanded)


ORACLE_MAX_VERTICES = 14


def delta_oracle(g: EmbeddedGraph, x: int, y: int) -> DeltaResult:
    """Exhaustive enumeration of all simple x-y paths (small graphs only)."""
    if g.n > ORACLE_MAX_VERTICES:
        raise ValueError(f"oracle limited to {ORACLE_MAX_VERTICES} vertices, got {g.n}")
    x, y = g.vertex(x), g.vertex(y)
    if x == y:
        return DeltaResult(0.0, PathWitness((x,), 0.0, 0.0), 0)
    found = []

    def walk(path):
        u = path[-1]
        if u == y:
            found.append(tuple(path))
            return
        for v in g.adjacency[u]:
            if v not in path:
                path.append(v)
                walk(path)
                path.pop()

    walk([x])
    if not found:
        return DeltaResult(math.inf, None, len(found))
    # pairwise maxima straight from the distance rows
    diams = [max(float(g.dist_row(p[a])[p[b]]) for a in range(len(p)) for b in range(a + 1, len(p)))
             for p in found]
    k = min(range(len(found)), key=lambda i: (diams[i], i))
    return DeltaResult(diams[k], make_witness(g, found[k]), len(found))


def delta_ball(g: EmbeddedGraph, x: int, r: float) -> set[int]:
    if not (r > 0 and math.isfinite(r)):
        raise ValueError("radius must be positive and finite")
    x = g.vertex(x)
    comp = component_of(g)
    return {v for v in range(g.n) if comp[v] == comp[x] and dist(g.vertices[x], g.vertices[v]) < r
            and delta(g, x, v).value < r}


def induced_connected(g: EmbeddedGraph, vs) -> bool:
    vs = set(vs)
    if not vs:
        return True
    start = min(vs)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


def eps_components(c: PlanarComplex, eps: float, h: float) -> list[list[int]]:
    """Classes of complex points under chains of sampled points with gaps < eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if h > eps / 4:
        raise ValueError("sampling step must satisfy h <= eps / 4")
    if not c.points:
        return []
    pts = [np.asarray(c.points, dtype=float)]
    for i, j in c.segments:
        p, q = np.asarray(c.points[i]), np.asarray(c.points[j])
        n = max(1, math.ceil(dist(p, q) / h))
        pts.append(p + (np.arange(1, n)[:, None] / n) * (q - p))
    allp = np.concatenate(pts, axis=0)
    uf = UnionFind(len(allp))
    # samples within one segment sit at spacing <= h < eps, so they chain up
    for a, b in cKDTree(allp).query_pairs(np.nextafter(eps, 0.0), output_type="ndarray"):
        uf.union(int(a), int(b))
    groups: dict[int, list[int]] = {}
    for k in range(len(c.points)):
        groups.setdefault(uf.find(k), []).append(k)
    return sorted(groups.values(), key=lambda g_: g_[0])


def star_lift(g: EmbeddedGraph, a: int) -> dict[int, PathWitness]:
    """Shortest-path tree rooted at ``a``: one path from ``a`` to every reachable vertex."""
    a = g.vertex(a)
    return {v: make_witness(g, p) for v, p in sorted(_dijkstra(g, a).items())}


def path_arc(g: EmbeddedGraph, w: PathWitness) -> OrientedPolyArc:
    return OrientedPolyArc(PolyArc(g.path_points(w.vertices)))


def canonical_lifting(g: EmbeddedGraph, lift: Mapping[int, PathWitness], x: int, y: int) -> OrientedPolyArc:
    """Arc from ``x`` to ``y`` obtained by joining the two star paths through the summit."""
    root = next(iter(w.vertices[0] for w in lift.values()))
    if x == root:
        return path_arc(g, lift[y])
    if y == root:
        return flip(path_arc(g, lift[x]))
    return vee(flip(path_arc(g, lift[x])), path_arc(g, lift[y]))
