"""Oriented polygonal arcs and the partial join operation ``vee``.

An oriented arc is a simple polyline together with a choice of which end is
``e0``.  ``vee(I0, I1)`` walks ``I0`` from ``e0`` until the first point that
also lies on ``I1`` and then follows ``I1`` to its ``e1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .geometry import (TOL, GeometryError, Point, PolyArc, Segment, _near_points, _short_edges, as_point, close, near_pairs,
                       diameter, dist, hausdorff, is_simple, lerp, point_segment_distance, project_param,
                       seg_intersect, PlanarComplex)


class ArcError(GeometryError):
    pass


class VeeError(ArcError):
    """``vee`` is undefined for the given pair; ``cause`` names the reason."""

    def __init__(self, cause: str, index: int | None = None):
        self.cause = cause
        self.index = index
        msg = cause if index is None else f"step {index}: {cause}"
        super().__init__(msg)


@dataclass(frozen=True)
class OrientedPolyArc:
    arc: PolyArc
    forward: bool = True

    @classmethod
    def from_points(cls, pts: Sequence) -> "OrientedPolyArc":
        return cls(PolyArc(tuple(pts)), True)

    @property
    def points(self) -> tuple:
        v = self.arc.vertices
        return v if self.forward else v[::-1]

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)

    @property
    def e0(self) -> Point:
        return self.points[0]

    @property
    def e1(self) -> Point:
        return self.points[-1]

    @property
    def degenerate(self) -> bool:
        return self.arc.degenerate

    def segments(self) -> list[Segment]:
        v = self.points
        return [Segment(v[i], v[i + 1]) for i in range(len(v) - 1)]

    def as_complex(self) -> PlanarComplex:
        # a simple arc has distinct vertices, so they index the complex directly
        v = self.points
        return PlanarComplex._trusted(v, tuple((k, k + 1) for k in range(len(v) - 1)))

    def __len__(self):
        return len(self.arc.vertices)


def endpoints(arc: OrientedPolyArc) -> tuple[Point, Point]:
    return arc.e0, arc.e1


def flip(arc: OrientedPolyArc) -> OrientedPolyArc:
    return OrientedPolyArc(arc.arc, not arc.forward)


@dataclass(frozen=True, order=True)
class ArcPosition:
    """Segment index along the oriented arc plus a parameter in [0, 1].

    Canonical form: ``t == 1`` only occurs on the last segment.
    """
    index: int
    t: float

    def point(self, arc: OrientedPolyArc) -> Point:
        v = arc.points
        if len(v) == 1:
            return v[0]
        return lerp(v[self.index], v[self.index + 1], self.t)


def _canonical(index: int, t: float, nseg: int) -> ArcPosition:
    if t >= 1.0 and index < nseg - 1:
        return ArcPosition(index + 1, 0.0)
    return ArcPosition(index, t)


def locate(arc: OrientedPolyArc, p, tol: float = TOL) -> ArcPosition:
    v = arc.points
    nseg = len(v) - 1
    if nseg == 0:
        if close(v[0], p, tol):
            return ArcPosition(0, 0.0)
        raise ArcError("point not on arc")
    # a compiled pass with some slack proposes candidates, the exact
    # predicates decide; vertices first so on-vertex queries land exactly
    verts, segs = _near_points(arc.array, float(p[0]), float(p[1]), tol * (1 + 1e-6) + 1e-300)
    for k in verts:
        if close(v[k], p, tol):
            return ArcPosition(k, 0.0) if k < nseg else ArcPosition(nseg - 1, 1.0)
    for k in segs:
        if point_segment_distance(p, v[k], v[k + 1]) <= tol:
            return _canonical(k, project_param(p, v[k], v[k + 1]), nseg)
    raise ArcError("point not on arc")


def _at_vertex(pos: ArcPosition) -> bool:
    return pos.t == 0.0 or pos.t == 1.0


def sub_arc(arc: OrientedPolyArc, a, b, tol: float = TOL) -> OrientedPolyArc:
    """Sub-arc of ``arc`` between ``a`` and ``b``, oriented from ``a`` to ``b``."""
    pts, forward = _sub_points(arc, a, b, tol)
    return OrientedPolyArc(PolyArc(pts), forward)


def _oriented(arc: OrientedPolyArc, a, b, tol: float) -> tuple:
    pts, forward = _sub_points(arc, a, b, tol)
    return pts if forward else pts[::-1]


def _sub_points(arc: OrientedPolyArc, a, b, tol: float) -> tuple[tuple, bool]:
    # vertices of the sub-arc in the order of ``arc``, plus whether a comes
    # first; simplicity is not checked here
    pa, pb = locate(arc, a, tol), locate(arc, b, tol)
    v = arc.points
    ca = pa.point(arc) if _at_vertex(pa) else as_point(a)
    cb = pb.point(arc) if _at_vertex(pb) else as_point(b)
    if pa == pb or close(ca, cb, tol):
        return (ca,), True
    lo, hi, clo, chi = (pa, pb, ca, cb) if pa < pb else (pb, pa, cb, ca)
    inner = [v[k] for k in range(lo.index + 1, hi.index + 1)]
    if hi.t == 1.0:
        inner.append(v[hi.index + 1])
    pts = [clo] + [w for w in inner if w != clo and w != chi]
    pts.append(chi)
    pts = _dedupe(pts, tol)
    if pts[0] != clo or pts[-1] != chi:
        pts[0], pts[-1] = clo, chi
    return tuple(pts), pa < pb


def _dedupe(pts: list, tol: float) -> list:
    if len(pts) > 8 and not _short_edges(np.asarray(pts, dtype=float), tol * (1 + 1e-6) + 1e-300):
        return list(pts)
    out = [pts[0]]
    for p in pts[1:-1]:
        if not close(p, out[-1], tol):
            out.append(p)
    last = pts[-1]
    while len(out) > 1 and close(out[-1], last, tol):
        out.pop()
    out.append(last)
    return out


def arc_le(arc: OrientedPolyArc, x, y, tol: float = TOL) -> bool:
    px, py = locate(arc, x, tol), locate(arc, y, tol)
    if close(px.point(arc), py.point(arc), tol):
        return True
    return px <= py


def _intersection_candidates(i0: OrientedPolyArc, i1: OrientedPolyArc, tol: float) -> list[Point]:
    if i0.degenerate or i1.degenerate:
        p, other = (i0.e0, i1) if i0.degenerate else (i1.e0, i0)
        try:
            locate(other, p, tol)
        except ArcError:
            return []
        return [p]
    v0, v1 = i0.points, i1.points
    out = []
    for a, b in near_pairs(_coords(i0), _coords(i1), tol):
        hit = seg_intersect(Segment(v0[a], v0[a + 1]), Segment(v1[b], v1[b + 1]), tol)
        if hit:
            out.extend(hit.points)
    return out


def _coords(arc: OrientedPolyArc) -> np.ndarray:
    v = arc.array
    return np.stack([v[:-1], v[1:]], axis=1)


def first_meet(i0: OrientedPolyArc, i1: OrientedPolyArc, tol: float = TOL) -> Point | None:
    """The point of ``I0 ∩ I1`` that is minimal in the order of ``I0``."""
    cands = _intersection_candidates(i0, i1, tol)
    if not cands:
        return None
    return min(cands, key=lambda p: (locate(i0, p, tol), p))


def vee(i0: OrientedPolyArc, i1: OrientedPolyArc, tol: float = TOL) -> OrientedPolyArc:
    a0, b1 = i0.e0, i1.e1
    c = first_meet(i0, i1, tol)
    if c is None:
        raise VeeError("vee undefined: disjoint")
    if close(a0, b1, tol):
        raise VeeError("vee undefined: endpoint clash")
    try:
        head = _oriented(i0, a0, c, tol)
        tail = _oriented(i1, c, b1, tol)
    except GeometryError:
        raise VeeError("vee degenerate: tolerance collision") from None
    pts = list(head) + list(tail[1:])
    pts[0], pts[-1] = a0, b1
    pts = _dedupe(pts, tol)
    # the sub-arcs are consecutive runs of pts, so one check covers them too
    if not is_simple(pts, tol):
        raise VeeError("vee degenerate: tolerance collision")
    return OrientedPolyArc(PolyArc._checked(tuple(pts)))


def fold_vee(seq: Sequence[OrientedPolyArc], tol: float = TOL, trace: list | None = None) -> OrientedPolyArc:
    """Left fold ``J_n = J_{n-1} vee I_n``; failures carry the failing index.

    When ``trace`` is a list, every intermediate ``J_n`` is appended to it.
    """
    if not seq:
        raise ArcError("fold_vee needs a nonempty sequence")
    acc = seq[0]
    if trace is not None:
        trace.append(acc)
    for n in range(1, len(seq)):
        try:
            acc = vee(acc, seq[n], tol)
        except VeeError as exc:
            raise VeeError(exc.cause, n) from None
        if trace is not None:
            trace.append(acc)
    return acc


@dataclass
class ConvergenceCertificate:
    """Evidence that a finite fold approximates the infinite join.

    ``increments[n]`` is d_H(J_n, J_{n+1}); ``tail[n]`` is d_H(J_n, J_N) and
    ``bounds[n]`` the admissible bound ``2 * sum_{p >= n} diam(I_p)``.  The
    distances are lower estimates and ``slack[n]`` is the certified error of
    ``tail[n]``, so a bound counts as met only when ``tail[n] + slack[n]``
    stays below it.
    """
    limit: Point
    tol: float
    increments: list = field(default_factory=list)
    tail: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    slack: list = field(default_factory=list)
    endpoint_error: float = 0.0

    @property
    def ok(self) -> bool:
        return all(t + e <= b for t, e, b in zip(self.tail, self.slack, self.bounds)) and self.endpoint_error <= self.tol


def _tail_estimate(a: PlanarComplex, b: PlanarComplex, h: float, bound: float, rounds: int = 8):
    # sharpen the step while the estimate is below the bound but the
    # sampling error still straddles it
    est = hausdorff(a, b, h)
    while rounds and est < bound < est + h:
        h = (bound - est) / 2
        est = hausdorff(a, b, h)
        rounds -= 1
    return est, h


def lim_vee(seq: Sequence[OrientedPolyArc], b, tol: float, h: float | None = None):
    """Finite stand-in for the join of a sequence of arcs shrinking to ``b``.

    Returns ``(J, certificate)`` where ``J`` is the fold of the whole sequence.
    Raises :class:`ArcError` ("no convergence at tolerance") when the tail
    Hausdorff bound fails or the last arc is not within ``tol`` of ``b``.
    """
    b = as_point(b)
    if not seq:
        raise ArcError("lim_vee needs a nonempty sequence")
    if close(seq[0].e0, b):
        raise ArcError("lim_vee: limit point equals the initial endpoint")
    last = seq[-1]
    if diameter(last.points) > tol or min(dist(p, b) for p in last.points) > tol:
        raise ArcError("no convergence at tolerance")
    trace: list = []
    fold_vee(seq, trace=trace)
    h = h if h is not None else tol / 10
    diams = [diameter(a.points) for a in seq]
    # suffix sums of the diameters of the inputs
    suffix = [0.0] * (len(seq) + 1)
    for n in range(len(seq) - 1, -1, -1):
        suffix[n] = suffix[n + 1] + diams[n]
    cert = ConvergenceCertificate(limit=b, tol=tol)
    cpx = [j.as_complex() for j in trace]
    final = cpx[-1]
    for n in range(len(trace) - 1):
        cert.increments.append(hausdorff(cpx[n], cpx[n + 1], h))
    for n in range(len(trace)):
        bound = 2 * suffix[n]
        est, step = (_tail_estimate(cpx[n], final, h, bound) if n < len(trace) - 1 else (0.0, 0.0))
        cert.tail.append(est)
        cert.slack.append(step)
        cert.bounds.append(bound)
    cert.endpoint_error = dist(trace[-1].e1, b)
    if not cert.ok:
        raise ArcError("no convergence at tolerance")
    return trace[-1], cert


@dataclass(frozen=True)
class Subdivision:
    pieces: tuple


def validate_subdivision(j: OrientedPolyArc, s: Subdivision | Sequence[OrientedPolyArc],
                         tol: float = TOL) -> bool:
    pieces = list(s.pieces if isinstance(s, Subdivision) else s)
    if not pieces:
        return False
    if not close(pieces[0].e0, j.e0, tol) or not close(pieces[-1].e1, j.e1, tol):
        return False
    prev = None
    for k, piece in enumerate(pieces):
        if k > 0 and not close(pieces[k - 1].e1, piece.e0, tol):
            return False
        try:
            lo, hi = locate(j, piece.e0, tol), locate(j, piece.e1, tol)
            for p in piece.points:
                locate(j, p, tol)
        except ArcError:
            return False
        if not lo < hi:
            return False
        if prev is not None and not prev < hi:
            return False
        prev = hi
    return True
