"""Planar primitives: points, segments, polylines, complexes and affine maps.

All predicates use the absolute tolerance ``TOL`` (points closer than ``TOL``
are identified).  Coordinates are plain 64-bit floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from numba import njit

TOL = 1e-9


class GeometryError(ValueError):
    pass


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise GeometryError(f"non-finite coordinate in {p!r}")
    return Point(x, y)


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def close(p, q, tol: float = TOL) -> bool:
    return dist(p, q) <= tol


def lerp(p, q, t: float) -> Point:
    if t == 0.0:
        return Point(*p)
    if t == 1.0:
        return Point(*q)
    return Point(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


@dataclass(frozen=True)
class Segment:
    p: Point
    q: Point

    def __post_init__(self):
        object.__setattr__(self, "p", as_point(self.p))
        object.__setattr__(self, "q", as_point(self.q))
        if self.p == self.q:
            raise GeometryError("degenerate segment; use an isolated point")

    @property
    def length(self) -> float:
        return dist(self.p, self.q)

    def reversed(self) -> "Segment":
        return Segment(self.q, self.p)


def project_param(p, a, b) -> float:
    """Parameter of the orthogonal projection of ``p`` on segment ``ab``, clamped to [0, 1]."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    den = dx * dx + dy * dy
    if den == 0.0:
        return 0.0
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / den
    return min(1.0, max(0.0, t))


def point_segment_distance(p, a, b) -> float:
    return dist(p, lerp(a, b, project_param(p, a, b)))


def segment_distance(a, b, c, d) -> float:
    if _proper_cross(a, b, c, d):
        return 0.0
    return min(point_segment_distance(a, c, d), point_segment_distance(b, c, d),
               point_segment_distance(c, a, b), point_segment_distance(d, a, b))


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _proper_cross(a, b, c, d) -> bool:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


@dataclass(frozen=True)
class Intersection:
    """Result of :func:`seg_intersect`.

    ``kind`` is ``"empty"``, ``"point"`` or ``"overlap"``; ``points`` holds
    zero, one or two points (overlap endpoints ordered along the first segment).
    """
    kind: str
    points: tuple = ()

    def __bool__(self):
        return self.kind != "empty"


EMPTY = Intersection("empty")


def seg_intersect(s1: Segment, s2: Segment, tol: float = TOL) -> Intersection:
    a, b = s1.p, s1.q
    c, d = s2.p, s2.q
    if segment_distance(a, b, c, d) > tol:
        return EMPTY
    la = s1.length
    # collinear when s2 runs within tol of the supporting line of s1 (and conversely)
    line_c = abs(_orient(a, b, c)) / la
    line_d = abs(_orient(a, b, d)) / la
    lb = s2.length
    line_a = abs(_orient(c, d, a)) / lb
    line_b = abs(_orient(c, d, b)) / lb
    if max(line_c, line_d) <= tol or max(line_a, line_b) <= tol:
        ux, uy = (b[0] - a[0]) / la, (b[1] - a[1]) / la
        tc = (c[0] - a[0]) * ux + (c[1] - a[1]) * uy
        td = (d[0] - a[0]) * ux + (d[1] - a[1]) * uy
        lo, hi = max(0.0, min(tc, td)), min(la, max(tc, td))
        if hi - lo > tol:
            return Intersection("overlap", (_snap_on(lo, a, b, la, c, d), _snap_on(hi, a, b, la, c, d)))
        return Intersection("point", (_touch_point(a, b, c, d, tol),))
    return Intersection("point", (_touch_point(a, b, c, d, tol),))


def _snap_on(t, a, b, la, c, d) -> Point:
    # prefer existing endpoints so that shared vertices stay bit-identical
    p = lerp(a, b, t / la)
    for e in (a, b, c, d):
        if close(p, e):
            return Point(*e)
    return p


def _touch_point(a, b, c, d, tol) -> Point:
    for e, (u, v) in ((a, (c, d)), (b, (c, d)), (c, (a, b)), (d, (a, b))):
        if point_segment_distance(e, u, v) <= tol:
            return Point(*e)
    # proper crossing
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = r[0] * s[1] - r[1] * s[0]
    t = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / den
    return lerp(a, b, min(1.0, max(0.0, t)))


@dataclass(frozen=True)
class PolyArc:
    """Simple polyline; a single vertex is a degenerate arc."""
    vertices: tuple

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        if not vs:
            raise GeometryError("PolyArc needs at least one vertex")
        object.__setattr__(self, "vertices", vs)
        if not is_simple(vs):
            raise GeometryError("polyline is not simple")

    @classmethod
    def _checked(cls, vertices: tuple) -> "PolyArc":
        """Wrap Points whose simplicity the caller has already verified."""
        arc = object.__new__(cls)
        object.__setattr__(arc, "vertices", vertices)
        return arc

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) == 1

    def segments(self) -> list[Segment]:
        v = self.vertices
        return [Segment(v[i], v[i + 1]) for i in range(len(v) - 1)]

    def length(self) -> float:
        v = self.vertices
        return sum(dist(v[i], v[i + 1]) for i in range(len(v) - 1))


def bbox_pairs(A: np.ndarray, B: np.ndarray | None = None, tol: float = TOL) -> np.ndarray:
    """Index pairs (i, j) of segments whose tol-inflated bounding boxes overlap.

    ``A`` and ``B`` have shape (n, 2, 2).  Without ``B`` only pairs i < j of
    ``A`` against itself are reported.
    """
    same = B is None
    B = A if same else B
    if len(A) == 0 or len(B) == 0:
        return np.zeros((0, 2), dtype=int)
    lo_a, hi_a = A.min(axis=1) - tol, A.max(axis=1) + tol
    lo_b, hi_b = B.min(axis=1), B.max(axis=1)
    if len(A) * len(B) <= 4_000_000:
        hit = ((lo_a[:, None, 0] <= hi_b[None, :, 0]) & (hi_a[:, None, 0] >= lo_b[None, :, 0])
               & (lo_a[:, None, 1] <= hi_b[None, :, 1]) & (hi_a[:, None, 1] >= lo_b[None, :, 1]))
        if same:
            hit = np.triu(hit, 1)
        return np.argwhere(hit)
    # sweep along x: sort B by left edge, binary-search the window for each A
    order = np.argsort(lo_b[:, 0], kind="stable")
    left_sorted = lo_b[order, 0]
    out = []
    ends = np.searchsorted(left_sorted, hi_a[:, 0], side="right")
    for i in range(len(A)):
        cand = order[:ends[i]]
        if same:
            cand = cand[cand > i]
        if len(cand) == 0:
            continue
        ok = ((hi_b[cand, 0] >= lo_a[i, 0]) & (hi_b[cand, 1] >= lo_a[i, 1])
              & (lo_b[cand, 1] <= hi_a[i, 1]))
        for j in cand[ok]:
            out.append((i, int(j)))
    return np.array(sorted(out), dtype=int).reshape(-1, 2)


def _point_seg_many(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    den = np.einsum("ij,ij->i", d, d)
    t = np.einsum("ij,ij->i", p - a, d) / np.where(den == 0.0, 1.0, den)
    t = np.clip(t, 0.0, 1.0)
    diff = p - (a + t[:, None] * d)
    return np.hypot(diff[:, 0], diff[:, 1])


def _orient_many(a, b, c) -> np.ndarray:
    return (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])


def segment_distance_many(a, b, c, d) -> np.ndarray:
    """Row-wise distance between segments a-b and c-d, each argument shaped (k, 2)."""
    out = np.minimum(np.minimum(_point_seg_many(a, c, d), _point_seg_many(b, c, d)),
                     np.minimum(_point_seg_many(c, a, b), _point_seg_many(d, a, b)))
    cross = ((_orient_many(a, b, c) * _orient_many(a, b, d) < 0)
             & (_orient_many(c, d, a) * _orient_many(c, d, b) < 0))
    return np.where(cross, 0.0, out)


@njit(cache=True)
def _pt_seg(px, py, ax, ay, bx, by) -> float:
    dx, dy = bx - ax, by - ay
    rx, ry = px - ax, py - ay
    den = dx * dx + dy * dy
    if den > 0.0:
        t = min(1.0, max(0.0, (rx * dx + ry * dy) / den))
        rx -= t * dx
        ry -= t * dy
    return math.sqrt(rx * rx + ry * ry)


@njit(cache=True)
def _near_dense(A, B, same, tol, margin):
    # bounding-box test followed by an approximate distance filter
    n, m = A.shape[0], B.shape[0]
    out = np.empty((max(16, n + m), 2), dtype=np.int64)
    cnt = 0
    for i in range(n):
        ax, ay, bx, by = A[i, 0, 0], A[i, 0, 1], A[i, 1, 0], A[i, 1, 1]
        lox, hix = min(ax, bx) - tol, max(ax, bx) + tol
        loy, hiy = min(ay, by) - tol, max(ay, by) + tol
        for j in range(i + 1 if same else 0, m):
            cx, cy, dx, dy = B[j, 0, 0], B[j, 0, 1], B[j, 1, 0], B[j, 1, 1]
            if lox > max(cx, dx) or hix < min(cx, dx) or loy > max(cy, dy) or hiy < min(cy, dy):
                continue
            o1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            o2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
            o3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
            o4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
            if not (o1 * o2 < 0 and o3 * o4 < 0):
                d = min(min(_pt_seg(ax, ay, cx, cy, dx, dy), _pt_seg(bx, by, cx, cy, dx, dy)),
                        min(_pt_seg(cx, cy, ax, ay, bx, by), _pt_seg(dx, dy, ax, ay, bx, by)))
                if d > margin:
                    continue
            if cnt == out.shape[0]:
                grown = np.empty((2 * cnt, 2), dtype=np.int64)
                grown[:cnt] = out[:cnt]
                out = grown
            out[cnt, 0], out[cnt, 1] = i, j
            cnt += 1
    return out[:cnt].copy()


def near_pairs(A: np.ndarray, B: np.ndarray | None = None, tol: float = TOL) -> np.ndarray:
    """Like :func:`bbox_pairs` but keeping only pairs that may lie within ``tol``.

    The distance is only a filter: the margin is far above rounding
    differences, and callers still decide every kept pair with the exact
    scalar predicates.
    """
    same = B is None
    B = A if same else B
    margin = 4 * tol + 1e-12
    if len(A) == 0 or len(B) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if len(A) * len(B) <= 4_000_000:
        return _near_dense(np.ascontiguousarray(A, dtype=float), np.ascontiguousarray(B, dtype=float),
                           same, tol, margin)
    pairs = bbox_pairs(A, None if same else B, tol)
    if len(pairs) == 0:
        return pairs
    i, j = pairs[:, 0], pairs[:, 1]
    dd = segment_distance_many(A[i, 0], A[i, 1], B[j, 0], B[j, 1])
    return pairs[dd <= margin]


@njit(cache=True)
def _short_edges(arr, slack):
    out = []
    for i in range(arr.shape[0] - 1):
        if math.sqrt((arr[i + 1, 0] - arr[i, 0]) ** 2 + (arr[i + 1, 1] - arr[i, 1]) ** 2) <= slack:
            out.append(i)
    return out


@njit(cache=True)
def _adjacent_near(arr, margin):
    # indices i where vertex i or i + 2 comes near the other segment at vertex i + 1
    out = []
    for i in range(arr.shape[0] - 2):
        d1 = _pt_seg(arr[i, 0], arr[i, 1], arr[i + 1, 0], arr[i + 1, 1], arr[i + 2, 0], arr[i + 2, 1])
        d2 = _pt_seg(arr[i + 2, 0], arr[i + 2, 1], arr[i, 0], arr[i, 1], arr[i + 1, 0], arr[i + 1, 1])
        if min(d1, d2) <= margin:
            out.append(i)
    return out


@njit(cache=True)
def _near_points(v, px, py, slack):
    # candidate vertices and segments within ``slack`` of (px, py), in order
    verts, segs = [], []
    for k in range(v.shape[0]):
        if math.sqrt((v[k, 0] - px) ** 2 + (v[k, 1] - py) ** 2) <= slack:
            verts.append(k)
    for k in range(v.shape[0] - 1):
        if _pt_seg(px, py, v[k, 0], v[k, 1], v[k + 1, 0], v[k + 1, 1]) <= slack:
            segs.append(k)
    return verts, segs


def is_simple(vertices: Sequence, tol: float = TOL) -> bool:
    vs = [tuple(v) for v in vertices]
    n = len(vs)
    if n == 0:
        return False
    arr = np.asarray(vs, dtype=float).reshape(-1, 2)
    for i in _short_edges(arr, tol * (1 + 1e-6) + 1e-300):
        if dist(vs[i], vs[i + 1]) <= tol:
            return False
    if n < 3:
        return True
    coords = np.stack([arr[:-1], arr[1:]], axis=1)
    # adjacent segments may only share their common vertex: neither far end
    # may come within tol of the other segment
    near = 4 * tol + 1e-12
    for i in _adjacent_near(arr, near):
        if point_segment_distance(vs[i], vs[i + 1], vs[i + 2]) <= tol or \
                point_segment_distance(vs[i + 2], vs[i], vs[i + 1]) <= tol:
            return False
        if seg_intersect(Segment(vs[i], vs[i + 1]), Segment(vs[i + 1], vs[i + 2]), tol).kind == "overlap":
            return False
    for i, j in near_pairs(coords, tol=tol):
        if j == i + 1:
            continue
        if seg_intersect(Segment(vs[i], vs[i + 1]), Segment(vs[j], vs[j + 1]), tol):
            return False
    return True


@dataclass(frozen=True)
class PlanarComplex:
    """Finite union of points and segments with optional point labels."""
    points: tuple
    segments: tuple = ()
    labels: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        segs = tuple((int(i), int(j)) for i, j in self.segments)
        n = len(pts)
        seen = set()
        for i, j in segs:
            if not (0 <= i < n and 0 <= j < n):
                raise GeometryError(f"segment index out of range: {(i, j)}")
            if pts[i] == pts[j]:
                raise GeometryError(f"degenerate segment {(i, j)}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GeometryError(f"duplicate segment {key}")
            seen.add(key)
        labels = dict(self.labels)
        for name, idx in labels.items():
            if not 0 <= idx < n:
                raise GeometryError(f"label {name!r} references missing point {idx}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def _trusted(cls, points: tuple, segments: tuple) -> "PlanarComplex":
        """Wrap Points and index pairs the caller knows to be valid."""
        c = object.__new__(cls)
        object.__setattr__(c, "points", points)
        object.__setattr__(c, "segments", segments)
        object.__setattr__(c, "labels", {})
        return c

    @classmethod
    def from_segments(cls, segs: Iterable, points: Iterable = (), labels: Mapping | None = None):
        """Build a complex from coordinate pairs, sharing bit-identical points.

        ``labels`` maps names to coordinates; labelled coordinates are added as
        points when not already present.
        """
        builder = ComplexBuilder()
        for p in points:
            builder.point(p)
        for p, q in segs:
            builder.segment(p, q)
        for name, p in (labels or {}).items():
            builder.label(name, p)
        return builder.build()

    def is_empty(self) -> bool:
        return not self.points

    def segment_coords(self) -> np.ndarray:
        if not self.segments:
            return np.zeros((0, 2, 2))
        pts = np.asarray(self.points, dtype=float)
        idx = np.asarray(self.segments, dtype=int)
        return pts[idx]

    @cached_property
    def _index(self) -> dict:
        # immutable instance, so the derived arrays and lookup sets are cached
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        return {"points": pts, "segments": self.segment_coords(),
                "point_set": frozenset(self.points),
                "segment_set": frozenset((self.points[i], self.points[j]) for i, j in self.segments)}

    def union(self, other: "PlanarComplex") -> "PlanarComplex":
        b = ComplexBuilder()
        b.extend(self)
        b.extend(other)
        return b.build()

    def label_point(self, name: str) -> Point:
        return self.points[self.labels[name]]


class ComplexBuilder:
    """Accumulates points/segments, merging bit-identical coordinates."""

    def __init__(self):
        self._index: dict[Point, int] = {}
        self.points: list[Point] = []
        self.segments: list[tuple[int, int]] = []
        self._seen: set = set()
        self.labels: dict[str, int] = {}

    def point(self, p) -> int:
        p = as_point(p)
        i = self._index.get(p)
        if i is None:
            i = self._index[p] = len(self.points)
            self.points.append(p)
        return i

    def segment(self, p, q):
        i, j = self.point(p), self.point(q)
        if i == j:
            return
        key = (min(i, j), max(i, j))
        if key not in self._seen:
            self._seen.add(key)
            self.segments.append((i, j))

    def label(self, name: str, p):
        self.labels[name] = self.point(p)

    def extend(self, c: PlanarComplex, prefix: str = ""):
        for p in c.points:
            self.point(p)
        for i, j in c.segments:
            self.segment(c.points[i], c.points[j])
        for name, i in c.labels.items():
            self.label(prefix + name, c.points[i])

    def build(self) -> PlanarComplex:
        return PlanarComplex(tuple(self.points), tuple(self.segments), dict(self.labels))


def diameter(c: PlanarComplex | Sequence) -> float:
    """Diameter of a complex; attained at a vertex pair by convexity."""
    pts = c.points if isinstance(c, PlanarComplex) else c
    if len(pts) == 0:
        raise GeometryError("diameter of an empty set")
    arr = np.asarray(pts, dtype=float)
    if len(arr) > 2000:
        from scipy.spatial import ConvexHull
        try:
            arr = arr[ConvexHull(arr).vertices]
        except Exception:  # collinear input
            pass
    best = 0.0
    for i in range(len(arr) - 1):
        d = np.hypot(arr[i + 1:, 0] - arr[i, 0], arr[i + 1:, 1] - arr[i, 1])
        best = max(best, float(d.max()))
    return best


def sample_complex(c: PlanarComplex, h: float, skip: set | None = None) -> np.ndarray:
    """All points of ``c`` plus samples at spacing <= h along every segment.

    Segments whose (unordered) coordinate pair is in ``skip`` are left out.
    """
    out = [np.asarray(c.points, dtype=float).reshape(-1, 2)]
    for i, j in c.segments:
        p, q = c.points[i], c.points[j]
        if skip and ((p, q) in skip or (q, p) in skip):
            continue
        n = max(1, math.ceil(dist(p, q) / h))
        t = np.arange(1, n)[:, None] / n
        out.append(np.asarray(p) + t * (np.asarray(q) - np.asarray(p)))
    return np.concatenate(out, axis=0)


def _elements(c: PlanarComplex) -> tuple:
    # segments plus every point as a zero-length segment, with their bounding boxes
    ix = c._index
    if "elements" not in ix:
        pts = ix["points"]
        elems = np.concatenate([ix["segments"], np.stack([pts, pts], axis=1)], axis=0)
        ix["elements"] = elems, elems.min(axis=1), elems.max(axis=1)
    return ix["elements"]


@njit(cache=True)
def _dist_to_elems(x, y, elems) -> float:
    best = np.inf
    for k in range(elems.shape[0]):
        ax, ay = elems[k, 0, 0], elems[k, 0, 1]
        dx, dy = elems[k, 1, 0] - ax, elems[k, 1, 1] - ay
        rx, ry = x - ax, y - ay
        den = dx * dx + dy * dy
        if den > 0.0:
            t = (rx * dx + ry * dy) / den
            t = min(1.0, max(0.0, t))
            rx -= t * dx
            ry -= t * dy
        d = math.sqrt(rx * rx + ry * ry)
        if d < best:
            best = d
    return best


@njit(cache=True)
def _convex_bound(x0, y0, x1, y1, elems) -> float:
    # distance to one segment is convex along a line, so on the interval it
    # never exceeds the larger of its two endpoint values
    best = np.inf
    for k in range(elems.shape[0]):
        one = elems[k:k + 1]
        d = max(_dist_to_elems(x0, y0, one), _dist_to_elems(x1, y1, one))
        if d < best:
            best = d
    return best


@njit(cache=True)
def _certified_sup(p0, p1, elems, h, best) -> float:
    """Raise ``best`` to within h of the sup over the segments p0[k]-p1[k] of
    the distance to ``elems``.

    Each segment is bisected depth first.  On an interval with endpoint
    values f0, f1 the distance is bounded by the 1-Lipschitz bound
    (f0 + f1 + L) / 2 and by the convexity bound of each single element.
    """
    cap = 64
    stack = np.empty((cap, 6))
    for i in range(p0.shape[0]):
        x0, y0, x1, y1 = p0[i, 0], p0[i, 1], p1[i, 0], p1[i, 1]
        f0 = _dist_to_elems(x0, y0, elems)
        f1 = _dist_to_elems(x1, y1, elems)
        best = max(best, f0, f1)
        stack[0, 0], stack[0, 1], stack[0, 2] = x0, y0, f0
        stack[0, 3], stack[0, 4], stack[0, 5] = x1, y1, f1
        top = 1
        while top > 0:
            top -= 1
            x0, y0, f0 = stack[top, 0], stack[top, 1], stack[top, 2]
            x1, y1, f1 = stack[top, 3], stack[top, 4], stack[top, 5]
            length = math.sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2)
            if (f0 + f1 + length) / 2 <= best + h:
                continue
            if _convex_bound(x0, y0, x1, y1, elems) <= best + h:
                continue
            xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
            fm = _dist_to_elems(xm, ym, elems)
            best = max(best, fm)
            if top + 2 > cap:
                cap *= 2
                grown = np.empty((cap, 6))
                grown[:top] = stack[:top]
                stack = grown
            stack[top, 0], stack[top, 1], stack[top, 2] = xm, ym, fm
            stack[top, 3], stack[top, 4], stack[top, 5] = x1, y1, f1
            stack[top + 1, 0], stack[top + 1, 1], stack[top + 1, 2] = x0, y0, f0
            stack[top + 1, 3], stack[top + 1, 4], stack[top + 1, 5] = xm, ym, fm
            top += 2
    return best


def _directed(A: PlanarComplex, B: PlanarComplex, h: float, batch: int = 128) -> float:
    """Certified sup over A of the distance to B: returns E with E <= sup <= E + h.

    Points of A count as zero-length pieces; segments shared verbatim with B
    are at distance 0 and skipped.  Pieces are handled in spatially sorted
    batches, each against only the elements of B that can be nearest to it:
    if the midpoint of a piece of half-length l lies within r of a point of
    B, every nearest element lies within r + 2 l of that midpoint.
    """
    from scipy.spatial import cKDTree

    elems, lo, hi = _elements(B)
    shared, bpts = B._index["segment_set"], B._index["point_set"]
    # points and segments of A that also belong to B are at distance 0
    pts = np.array([p for p in A.points if p not in bpts], dtype=float).reshape(-1, 2)
    todo = [(A.points[i], A.points[j]) for i, j in A.segments
            if (A.points[i], A.points[j]) not in shared and (A.points[j], A.points[i]) not in shared]
    q0 = np.concatenate([pts, np.array([s[0] for s in todo], dtype=float).reshape(-1, 2)])
    q1 = np.concatenate([pts, np.array([s[1] for s in todo], dtype=float).reshape(-1, 2)])
    if len(q0) == 0:
        return 0.0
    if len(q0) * len(elems) <= 50_000:
        return _certified_sup(q0, q1, elems, h, 0.0)
    mid = (q0 + q1) / 2
    half = np.hypot(*(q1 - q0).T) / 2
    ix = B._index
    if "kdtree" not in ix:
        ix["kdtree"] = cKDTree(ix["points"])
    r, _ = ix["kdtree"].query(mid)
    reach = r + 2 * half
    span = max(float(np.ptp(mid, axis=0).max()), 1e-300)
    cell = np.floor((mid - mid.min(axis=0)) / span * 64)
    order = np.lexsort((cell[:, 1], cell[:, 0]))
    best = 0.0
    for k in range(0, len(order), batch):
        idx = order[k:k + batch]
        box_lo = (mid[idx] - reach[idx, None]).min(axis=0)
        box_hi = (mid[idx] + reach[idx, None]).max(axis=0)
        near = np.all((hi >= box_lo) & (lo <= box_hi), axis=1)
        best = _certified_sup(q0[idx], q1[idx], elems[near], h, best)
    return best


def hausdorff(A: PlanarComplex, B: PlanarComplex, h: float) -> float:
    """Hausdorff distance estimate E with E <= d_H(A, B) <= E + h."""
    if A.is_empty() or B.is_empty():
        raise GeometryError("hausdorff of an empty set")
    if h <= 0:
        raise GeometryError("sampling step must be positive")
    return max(_directed(A, B, h), _directed(B, A, h))


@dataclass(frozen=True)
class AffineMap:
    """x -> L x + t with ``linear`` = (a, b, c, d) meaning [[a, b], [c, d]]."""
    linear: tuple = (1.0, 0.0, 0.0, 1.0)
    translation: tuple = (0.0, 0.0)

    def __post_init__(self):
        a, b, c, d = (float(v) for v in self.linear)
        if a * d - b * c == 0.0:
            raise GeometryError("singular affine map")
        object.__setattr__(self, "linear", (a, b, c, d))
        object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))

    @classmethod
    def box(cls, src_lo, src_hi, dst_lo, dst_hi) -> "AffineMap":
        """Axis-aligned map sending the box [src_lo, src_hi] onto [dst_lo, dst_hi]."""
        sx = (dst_hi[0] - dst_lo[0]) / (src_hi[0] - src_lo[0])
        sy = (dst_hi[1] - dst_lo[1]) / (src_hi[1] - src_lo[1])
        return cls((sx, 0.0, 0.0, sy), (dst_lo[0] - sx * src_lo[0], dst_lo[1] - sy * src_lo[1]))

    @classmethod
    def scaling(cls, k: float, center=(0.0, 0.0)) -> "AffineMap":
        return cls((k, 0.0, 0.0, k), (center[0] * (1 - k), center[1] * (1 - k)))

    def __call__(self, p) -> Point:
        a, b, c, d = self.linear
        tx, ty = self.translation
        return Point(a * p[0] + b * p[1] + tx, c * p[0] + d * p[1] + ty)

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        a, b, c, d = self.linear
        e, f, g, h = other.linear
        lin = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return AffineMap(lin, self(other.translation))


def affine_apply(m: AffineMap, c: PlanarComplex) -> PlanarComplex:
    pts = tuple(m(p) for p in c.points)
    return PlanarComplex(pts, c.segments, dict(c.labels))
