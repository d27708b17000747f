"""Simple triods, rational circular traps and the Moore intersection property.

A trap is an open disk with three pairwise disjoint closed arcs on its
boundary.  A triod is compatible with a trap when it sits in the closed disk,
touches the circle only at the outer ends of its legs, and each leg ends in a
different arc.  Two triods compatible with the same trap must meet.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arcs import ArcError, OrientedPolyArc, VeeError, flip, locate, sub_arc, vee
from .geometry import (TOL, GeometryError, Point, PolyArc, Segment, as_point, close, dist, is_simple,
                       point_segment_distance, seg_intersect)
from .metric import EmbeddedGraph, arc_components


class TriodError(GeometryError):
    pass


class MooreViolation(RuntimeError):
    """Two triods compatible with one trap failed to meet: a geometry bug."""


@dataclass(frozen=True)
class SimpleTriod:
    """Three simple polylines (legs) starting at a common center and otherwise disjoint.

    ``center_index`` is the graph vertex of the center when the triod was
    detected in an :class:`EmbeddedGraph`.
    """
    center: Point
    legs: tuple
    center_index: int | None = None

    def __post_init__(self):
        c = as_point(self.center)
        legs = tuple(tuple(as_point(p) for p in leg) for leg in self.legs)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "legs", legs)
        if len(legs) != 3:
            raise TriodError("a triod has exactly three legs")
        for leg in legs:
            if len(leg) < 2:
                raise TriodError("each leg needs at least one edge")
            if leg[0] != c:
                raise TriodError("legs must start at the center")
            if not is_simple(leg):
                raise TriodError("leg is not simple")
        for a, b in itertools.combinations(legs, 2):
            for s in _segs(a):
                for t in _segs(b):
                    if any(not close(p, c) for p in seg_intersect(s, t).points):
                        raise TriodError("legs meet away from the center")

    def segments(self) -> list[Segment]:
        return [s for leg in self.legs for s in _segs(leg)]

    def leg_arc(self, k: int) -> OrientedPolyArc:
        return OrientedPolyArc(PolyArc(self.legs[k]))

    def contains(self, p, tol: float = TOL) -> bool:
        return any(point_segment_distance(p, s.p, s.q) <= tol for s in self.segments())


def _segs(leg) -> list[Segment]:
    return [Segment(leg[i], leg[i + 1]) for i in range(len(leg) - 1)]


def center(t: SimpleTriod) -> Point:
    return t.center


def _disjoint_arcs(a, b) -> bool:
    (s1, l1), (s2, l2) = a, b
    return (s2 - s1) % 1 > l1 and (s1 - s2) % 1 > l2


@dataclass(frozen=True)
class TriodTrap:
    """Open disk with rational center and radius, plus three boundary arcs.

    Arcs are ``(start, length)`` pairs measured in turns, counterclockwise.
    """
    center: tuple
    radius: Fraction
    arcs: tuple

    def __post_init__(self):
        cx, cy = (Fraction(v) for v in self.center)
        arcs = tuple((Fraction(s) % 1, Fraction(l)) for s, l in self.arcs)
        object.__setattr__(self, "center", (cx, cy))
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "arcs", arcs)
        if self.radius <= 0:
            raise TriodError("trap radius must be positive")
        if len(arcs) != 3 or any(not 0 < l < 1 for _, l in arcs):
            raise TriodError("a trap has three proper boundary arcs")
        for a, b in itertools.combinations(arcs, 2):
            if not _disjoint_arcs(a, b):
                raise TriodError("trap arcs must be pairwise disjoint")

    @property
    def diameter(self) -> Fraction:
        return 2 * self.radius

    @property
    def fcenter(self) -> Point:
        return Point(float(self.center[0]), float(self.center[1]))

    def contains(self, p, tol: float = TOL) -> bool:
        """Membership in the open disk, with a margin of ``tol``."""
        return dist(p, self.fcenter) < float(self.radius) - tol

    def angle(self, p) -> float:
        c = self.fcenter
        return (math.atan2(p[1] - c[1], p[0] - c[0]) / (2 * math.pi)) % 1.0

    def in_arc(self, p, k: int, tol: float = TOL) -> bool:
        s, l = self.arcs[k]
        slack = tol / (2 * math.pi * float(self.radius))
        off = (self.angle(p) - float(s)) % 1.0
        return off <= float(l) + slack or off >= 1.0 - slack

    def rotated(self, turns) -> "TriodTrap":
        return TriodTrap(self.center, self.radius, tuple((s + Fraction(turns), l) for s, l in self.arcs))


def compatibility(t: SimpleTriod, p: TriodTrap, tol: float = TOL) -> tuple | None:
    """The first permutation (leg k ends in arc perm[k]) witnessing compatibility, or None."""
    c, r = p.fcenter, float(p.radius)
    for leg in t.legs:
        if any(dist(v, c) >= r - tol for v in leg[:-1]):
            return None
        if abs(dist(leg[-1], c) - r) > tol:
            return None
    for perm in itertools.permutations(range(3)):
        if all(p.in_arc(t.legs[k][-1], perm[k], tol) for k in range(3)):
            return perm
    return None


def is_compatible(t: SimpleTriod, p: TriodTrap, tol: float = TOL) -> bool:
    return compatibility(t, p, tol) is not None


def _exit_point(a: Point, b: Point, c: Point, r: float) -> float:
    """Largest t in [0, 1] with |a + t(b - a) - c| = r, assuming ``a`` is inside."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    fx, fy = a[0] - c[0], a[1] - c[1]
    qa = dx * dx + dy * dy
    qb = 2 * (fx * dx + fy * dy)
    qc = fx * fx + fy * fy - r * r
    disc = max(qb * qb - 4 * qa * qc, 0.0)
    return min(1.0, (-qb + math.sqrt(disc)) / (2 * qa))


def restrict(t: SimpleTriod, disk_center, radius, tol: float = TOL) -> SimpleTriod:
    """Cut every leg at its first crossing of the circle, walking out from the center."""
    c, r = as_point(disk_center), float(radius)
    if dist(t.center, c) >= r - tol:
        raise TriodError("center outside disk")
    legs = []
    for leg in t.legs:
        out = [leg[0]]
        for a, b in zip(leg, leg[1:]):
            db = dist(b, c)
            if db < r - tol:
                out.append(b)
                continue
            if abs(db - r) <= tol:
                out.append(b)
            else:
                s = _exit_point(a, b, c, r)
                out.append(Point(a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])))
            break
        else:
            raise TriodError("a leg lies entirely inside the disk")
        legs.append(tuple(out))
    return SimpleTriod(t.center, tuple(legs), t.center_index)


def restrict_to_trap(t: SimpleTriod, p: TriodTrap, tol: float = TOL) -> SimpleTriod:
    return restrict(t, p.fcenter, float(p.radius), tol)


def is_weakly_compatible(t: SimpleTriod, p: TriodTrap, tol: float = TOL) -> bool:
    if not p.contains(t.center, tol):
        return False
    try:
        small = restrict_to_trap(t, p, tol)
    except TriodError:
        return False
    return is_compatible(small, p, tol)


def clearance(t: SimpleTriod) -> float:
    """Distance from the center to the part of the triod not on a leg's first edge."""
    c = t.center
    best = math.inf
    for leg in t.legs:
        best = min(best, dist(c, leg[1]))
        for a, b in zip(leg[1:], leg[2:]):
            best = min(best, point_segment_distance(c, a, b))
    return best


def dyadic_below(x: float, bits: int = 24) -> Fraction:
    """A dyadic rational strictly below ``x > 0`` with about ``bits`` significant bits."""
    e = bits - math.frexp(x)[1]
    q = Fraction(2) ** e
    m = math.ceil(Fraction(x) * q) - 1
    return Fraction(m) / q


def find_rational_trap(t: SimpleTriod, eps: float, tol: float = TOL) -> TriodTrap:
    """A rational circular trap of diameter < eps that the triod is weakly compatible with.

    The center is the triod center (floats are dyadic rationals, so exact).
    The radius stays below half the clearance, so every leg leaves the disk
    through its first edge, and each boundary arc is centred on a leg
    direction with half-width a quarter of the smallest angular gap.
    """
    if not eps > 0:
        raise TriodError("eps must be positive")
    clear = clearance(t)
    if clear < tol:
        raise TriodError("triod too degenerate at this tolerance")
    radius = dyadic_below(min(eps / 2, clear / 2))
    if radius <= 2 * tol:
        raise TriodError("triod too degenerate at this tolerance")
    c = t.center
    angles = [(math.atan2(leg[1][1] - c[1], leg[1][0] - c[0]) / (2 * math.pi)) % 1.0 for leg in t.legs]
    srt = sorted(angles)
    gap = min((srt[(k + 1) % 3] - srt[k]) % 1.0 for k in range(3))
    if gap * 2 * math.pi < tol:
        raise TriodError("triod too degenerate at this tolerance")
    w = dyadic_below(gap / 4)
    trap = TriodTrap((Fraction(c[0]), Fraction(c[1])), radius,
                     tuple((Fraction(a) - w, 2 * w) for a in angles))
    if not is_weakly_compatible(t, trap, tol):
        raise TriodError("triod too degenerate at this tolerance")
    return trap


def _require(t: SimpleTriod, p: TriodTrap, tol: float):
    if not is_compatible(t, p, tol):
        raise TriodError("precondition violated: triod not compatible with trap")


def moore_intersect(t1: SimpleTriod, t2: SimpleTriod, p: TriodTrap, tol: float = TOL) -> Point:
    """Lexicographically least common point of two triods compatible with ``p``."""
    _require(t1, p, tol)
    _require(t2, p, tol)
    hits = []
    for s in t1.segments():
        for u in t2.segments():
            hits.extend(seg_intersect(s, u, tol).points)
    if not hits:
        raise MooreViolation("MOORE VIOLATION: compatible triods do not meet")
    return min(hits)


def _path_to(t: SimpleTriod, z: Point, tol: float) -> OrientedPolyArc:
    if close(t.center, z, tol):
        return OrientedPolyArc(PolyArc((t.center,)))
    for k in range(3):
        arc = t.leg_arc(k)
        try:
            locate(arc, z, tol)
        except ArcError:
            continue
        return sub_arc(arc, t.center, z, tol)
    raise TriodError("point not on triod")


def join_centers(t1: SimpleTriod, t2: SimpleTriod, p: TriodTrap, tol: float = TOL) -> OrientedPolyArc:
    """An arc from the center of ``t1`` to the center of ``t2`` inside their union."""
    z = moore_intersect(t1, t2, p, tol)
    if close(t1.center, t2.center, tol):
        return OrientedPolyArc(PolyArc((t1.center,)))
    a = _path_to(t1, z, tol)
    b = flip(_path_to(t2, z, tol))
    try:
        out = vee(a, b, tol)
    except VeeError as exc:
        raise TriodError(f"cannot join centers: {exc}") from None
    pts = list(out.points)
    pts[0], pts[-1] = t1.center, t2.center
    return OrientedPolyArc(PolyArc(tuple(pts)))


def detect_triods(g: EmbeddedGraph) -> list[SimpleTriod]:
    """One minimal triod per vertex of degree >= 3, using its three lowest-index neighbours."""
    out = []
    for v in range(g.n):
        nb = g.adjacency[v]
        if len(nb) >= 3:
            c = g.vertices[v]
            out.append(SimpleTriod(c, tuple((c, g.vertices[w]) for w in nb[:3]), v))
    return out


def triodic_kernel(g: EmbeddedGraph) -> tuple[tuple, frozenset]:
    """Triod centers and the union of the components that contain one."""
    centers = [t.center_index for t in detect_triods(g)]
    part = set()
    cs = set(centers)
    for comp in arc_components(g):
        if cs.intersection(comp):
            part.update(comp)
    return tuple(g.vertices[v] for v in centers), frozenset(part)


def random_trap(rng: np.random.Generator) -> TriodTrap:
    """A random rational trap: dyadic center and radius, three random disjoint arcs."""
    cx, cy = (Fraction(int(rng.integers(-64, 65)), 64) for _ in range(2))
    radius = Fraction(int(rng.integers(16, 129)), 64)
    while True:
        cuts = sorted(Fraction(int(x), 1024) for x in rng.choice(1024, size=3, replace=False))
        gaps = [(cuts[(k + 1) % 3] - cuts[k]) % 1 for k in range(3)]
        if min(gaps) >= Fraction(1, 32):
            break
    arcs = []
    for k in range(3):
        frac = Fraction(int(rng.integers(2, 7)), 8)
        arcs.append((cuts[k], gaps[k] * frac))
    return TriodTrap((cx, cy), radius, tuple(arcs))


def random_compatible_triod(p: TriodTrap, rng: np.random.Generator, bends: int = 2,
                            tries: int = 1000) -> SimpleTriod:
    """Rejection-sample a triod with polygonal legs compatible with ``p``."""
    c, r = p.fcenter, float(p.radius)

    def inside(scale):
        rho = scale * r * math.sqrt(rng.random())
        phi = 2 * math.pi * rng.random()
        return Point(c[0] + rho * math.cos(phi), c[1] + rho * math.sin(phi))

    for _ in range(tries):
        hub = inside(0.8)
        perm = rng.permutation(3)
        legs = []
        for k in range(3):
            s, l = p.arcs[int(perm[k])]
            phi = 2 * math.pi * float(s + l * Fraction(int(rng.integers(1, 16)), 16))
            end = Point(c[0] + r * math.cos(phi), c[1] + r * math.sin(phi))
            mids = [inside(0.9) for _ in range(int(rng.integers(0, bends + 1)))]
            legs.append((hub, *mids, end))
        try:
            t = SimpleTriod(hub, tuple(legs))
        except (TriodError, GeometryError):
            continue
        if is_compatible(t, p):
            return t
    raise TriodError("could not sample a compatible triod")
