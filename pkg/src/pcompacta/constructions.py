"""Tree-indexed generators: Cantor endpoints, Becker sets, the comb and its shortcuts.

Every coordinate is computed in exact rational arithmetic and rounded once,
so a point shared by two pieces (a tooth vertex of a parent that is also the
top-left corner of a child, say) is bit-identical in both.

Ill-foundedness of a tree cannot be seen at any finite truncation, so it is
modelled by an explicit bridge flag: a bridged node of a Becker set gets one
extra segment standing in for the limit of its infinite branch.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .geometry import TOL, AffineMap, ComplexBuilder, GeometryError, PlanarComplex, Point, affine_apply

MAX_DEPTH = 6
# smallest usable identification tolerance: a couple of ulps at unit scale
FLOAT_FLOOR = 2.0 ** -52
BRIDGE_NOTE = ("bridge flags stand in for ill-founded subtrees: a bridged node adds the segment "
               "from its last zigzag tooth top to the top of its right edge")


class ConstructionError(GeometryError):
    pass


Node = tuple


def node_name(s: Node) -> str:
    return "root" if not s else "_".join(str(n) for n in s)


@dataclass(frozen=True)
class FiniteTree:
    """Prefix-closed finite set of integer sequences containing the root."""
    nodes: frozenset = frozenset({()})

    def __post_init__(self):
        nodes = frozenset(tuple(int(n) for n in s) for s in self.nodes)
        for s in nodes:
            if any(n < 0 for n in s):
                raise ConstructionError(f"negative label in node {s}")
            if s and s[:-1] not in nodes:
                raise ConstructionError(f"tree is not prefix-closed at {s}")
        if () not in nodes:
            raise ConstructionError("tree must contain the root")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def from_nodes(cls, nodes: Iterable) -> "FiniteTree":
        """Build a tree, adding any missing ancestors."""
        out = {()}
        for s in nodes:
            s = tuple(s)
            out.update(s[:k] for k in range(len(s) + 1))
        return cls(frozenset(out))

    @classmethod
    def root_only(cls) -> "FiniteTree":
        return cls(frozenset({()}))

    def sorted(self) -> list:
        return sorted(self.nodes)

    def children(self, s: Node) -> list:
        return sorted(t for t in self.nodes if len(t) == len(s) + 1 and t[:-1] == s)

    def leaves(self) -> list:
        return [s for s in self.sorted() if not self.children(s)]

    @property
    def depth(self) -> int:
        return max(len(s) for s in self.nodes)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class TruncationParams:
    depth: int = 3
    zigzag: int = 3
    bridges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.depth < 1 or self.zigzag < 1:
            raise ConstructionError("depth and zigzag cap must be at least 1")
        if self.depth > MAX_DEPTH:
            raise ConstructionError(f"depth {self.depth} exceeds cap {MAX_DEPTH}")
        object.__setattr__(self, "bridges", frozenset(tuple(s) for s in self.bridges))

    def check_tree(self, t: FiniteTree):
        for s in t.nodes:
            if len(s) > self.depth:
                raise ConstructionError(f"node {s} deeper than cap {self.depth}")
            if any(n > self.zigzag for n in s):
                raise ConstructionError(f"node {s} has a child index above cap {self.zigzag}")
        extra = self.bridges - t.nodes
        if extra:
            raise ConstructionError(f"bridge flag on missing node {min(extra)}")


# ---- Cantor scheme -------------------------------------------------------------

RHO = Fraction(1, 4)


def base_a(n: int) -> Fraction:
    return 1 - 3 * Fraction(1, 4) ** (n + 1)


def base_b(n: int) -> Fraction:
    return 1 - 2 * Fraction(1, 4) ** (n + 1)


@lru_cache(maxsize=None)
def cantor_endpoints_exact(s: Node) -> tuple[Fraction, Fraction]:
    if not s:
        return Fraction(0), Fraction(1)
    a, b = cantor_endpoints_exact(s[:-1])
    n = s[-1]
    return a + base_a(n) * (b - a), a + base_b(n) * (b - a)


def cantor_endpoints(s: Node) -> tuple[float, float]:
    a, b = cantor_endpoints_exact(tuple(s))
    return float(a), float(b)


def _pt(x: Fraction, y: Fraction) -> Point:
    return Point(float(x), float(y))


# ---- Becker sets ---------------------------------------------------------------

def _box(s: Node):
    """Exact box map for R_s: x -> a_s + x (b_s - a_s), y -> y 2^-|s|."""
    a, b = cantor_endpoints_exact(s)
    sy = Fraction(1, 2 ** len(s))
    return lambda x, y: _pt(a + Fraction(x) * (b - a), Fraction(y) * sy)


def _becker_R_into(builder: ComplexBuilder, s: Node, N: int, bridge: bool):
    m = _box(s)
    half, one = Fraction(1, 2), Fraction(1)
    builder.segment(m(0, 0), m(1, 0))
    builder.segment(m(1, 0), m(1, 1))
    builder.segment(m(0, 1), m(base_a(0), half))
    for n in range(N + 1):
        builder.segment(m(base_a(n), half), m(base_b(n), one))
        if n < N:
            builder.segment(m(base_b(n), one), m(base_a(n + 1), half))
        builder.label(f"a_hat_{node_name(s + (n,))}", m(base_a(n), half))
        builder.label(f"b_hat_{node_name(s + (n,))}", m(base_b(n), one))
    if bridge:
        builder.segment(m(base_b(N), one), m(1, 1))
    builder.label(f"a_hat_{node_name(s)}", m(0, 1))
    builder.label(f"corner_{node_name(s)}", m(1, 0))


def becker_R(s: Node, N: int, bridge: bool = False) -> PlanarComplex:
    s = tuple(s)
    if len(s) > MAX_DEPTH:
        raise ConstructionError(f"node {s} deeper than cap {MAX_DEPTH}")
    b = ComplexBuilder()
    _becker_R_into(b, s, N, bridge)
    return b.build()


def becker_set(t: FiniteTree, params: TruncationParams) -> PlanarComplex:
    """Union of the pieces R_s over the tree, with bridges where flagged."""
    params.check_tree(t)
    b = ComplexBuilder()
    for s in t.sorted():
        _becker_R_into(b, s, params.zigzag, s in params.bridges)
    return b.build()


# ---- the comb ------------------------------------------------------------------

THETA = Fraction(2, 3)


def alpha(k: int) -> Fraction:
    return THETA + Fraction(1, 4) ** k / 3


def comb_nodes(D: int, N: int) -> list:
    out = []
    for k in range(D + 1):
        out.extend(itertools.product(range(N + 1), repeat=k))
    return sorted(out)


def comb_points(s: Node) -> dict[str, Point]:
    """The named vertices of the piece of the comb attached to ``s``."""
    s = tuple(s)
    k = len(s)
    a, b = cantor_endpoints_exact(s)
    a0, _ = cantor_endpoints_exact(s + (0,))
    return {"a_hat": _pt(a, alpha(k)), "c_hat": _pt(a, alpha(k) - THETA),
            "a_hat_child": _pt(a0, alpha(k + 1)), "b_hat": _pt(b, alpha(k + 1)),
            "foot": _pt(b, Fraction(0))}


def comb_P(D: int, N: int) -> PlanarComplex:
    """Truncated comb: for each node a descent I_s, a slant, a shelf H_s and a spike J_s."""
    if D < 1 or N < 1:
        raise ConstructionError("depth and zigzag cap must be at least 1")
    if D > MAX_DEPTH:
        raise ConstructionError(f"depth {D} exceeds cap {MAX_DEPTH}")
    b = ComplexBuilder()
    for s in comb_nodes(D, N):
        p = comb_points(s)
        b.segment(p["a_hat"], p["c_hat"])
        b.segment(p["c_hat"], p["a_hat_child"])
        b.segment(p["a_hat_child"], p["b_hat"])
        b.segment(p["b_hat"], p["foot"])
        name = node_name(s)
        b.label(f"a_hat_{name}", p["a_hat"])
        b.label(f"c_hat_{name}", p["c_hat"])
        b.label(f"b_hat_{name}", p["b_hat"])
    return b.build()


def shortcut_square(s: Node) -> tuple[Point, float]:
    """Lower-left corner and side of the square gadget slot for node ``s``."""
    s = tuple(s)
    k = len(s)
    lo_x, _ = cantor_endpoints_exact(s + (0,))
    _, hi_x = cantor_endpoints_exact(s)
    lo_y, hi_y = alpha(k + 1), alpha(k)
    side = min(hi_x - lo_x, hi_y - lo_y) / 2
    return _pt((lo_x + hi_x - side) / 2, (lo_y + hi_y - side) / 2), float(side)


@dataclass(frozen=True)
class Gadget:
    """A tree and its bridge flags, to be placed in one shortcut slot."""
    tree: FiniteTree = field(default_factory=FiniteTree.root_only)
    bridges: frozenset = frozenset()


def shortcut(s: Node, t: FiniteTree, params: TruncationParams) -> PlanarComplex:
    """Scaled Becker set inside the slot of ``s`` plus two vertical connectors."""
    s = tuple(s)
    if len(s) < 1:
        raise ConstructionError("shortcuts exist only below the root")
    k = len(s)
    corner, side = shortcut_square(s)
    h = AffineMap((side, 0.0, 0.0, side), corner)
    inner = affine_apply(h, becker_set(t, params))
    top, bottom = h((0.0, 1.0)), h((1.0, 0.0))
    upper = comb_points(s[:-1])
    lower = comb_points(s)
    if not upper["a_hat_child"].x <= top.x <= upper["b_hat"].x:
        raise ConstructionError(f"upper connector of {s} misses the parent shelf")
    if not lower["a_hat_child"].x <= bottom.x <= lower["b_hat"].x:
        raise ConstructionError(f"lower connector of {s} misses its shelf")
    b = ComplexBuilder()
    b.extend(inner, prefix=f"S_{node_name(s)}:")
    b.segment(top, Point(top.x, float(alpha(k))))
    b.segment(bottom, Point(bottom.x, float(alpha(k + 1))))
    return b.build()


def psi(assignment: Mapping[Node, Gadget], params: TruncationParams) -> PlanarComplex:
    """The comb with a shortcut gadget spliced in at every assigned node."""
    b = ComplexBuilder()
    b.extend(comb_P(params.depth, params.zigzag))
    for s in sorted(tuple(k) for k in assignment):
        if not 1 <= len(s) <= params.depth or any(n > params.zigzag for n in s):
            raise ConstructionError(f"node {s} outside the truncated comb")
        g = assignment[s]
        sub = TruncationParams(params.depth, params.zigzag, g.bridges)
        b.extend(shortcut(s, g.tree, sub))
    return b.build()


def regularize(table: Mapping[Node, bool]) -> dict:
    """A node stays marked only when it and every nonempty ancestor are marked."""
    table = {tuple(k): bool(v) for k, v in table.items()}
    return {s: all(table.get(s[:j], False) for j in range(1, len(s) + 1)) if s else table[s]
            for s in table}


def phi_assignment(table: Mapping[Node, bool], params: TruncationParams) -> dict:
    reg = regularize(table)
    out = {}
    for s in comb_nodes(params.depth, params.zigzag):
        if not s:
            continue
        bridged = not reg.get(s, False)
        out[s] = Gadget(FiniteTree.root_only(), frozenset({()}) if bridged else frozenset())
    return out


def reduction_phi(table: Mapping[Node, bool], params: TruncationParams) -> PlanarComplex:
    """Comb with a one-node gadget at every node, bridged exactly where the
    regularized table is false."""
    return psi(phi_assignment(table, params), params)


# ---- working tolerances ----------------------------------------------------------
# Deep nodes with large child indices shrink below the default tolerance (at
# depth 3 with index 3 a tooth sits about 5e-10 from its right edge), so every
# generator also reports the tolerance its geometry needs: a fraction of its
# smallest feature, never above TOL and never below a couple of ulps.

def working_tol(feature: float) -> float:
    return max(min(TOL, feature / 8), FLOAT_FLOOR)


def _width(s: Node) -> float:
    a, b = cantor_endpoints_exact(tuple(s))
    return float(b - a)


def becker_feature(t: FiniteTree, N: int) -> float:
    """Smallest gap in a Becker set: a tooth-scale fraction of the narrowest box."""
    return min(_width(s) for s in t.nodes) * 4.0 ** -(N + 1)


def becker_tol(t: FiniteTree, params: TruncationParams) -> float:
    return working_tol(becker_feature(t, params.zigzag))


def comb_feature(D: int, N: int) -> float:
    return _width((N,) * D) * 4.0 ** -(N + 1)


def comb_tol(D: int, N: int) -> float:
    return working_tol(comb_feature(D, N))


def psi_tol(assignment: Mapping[Node, Gadget], params: TruncationParams) -> float:
    feat = comb_feature(params.depth, params.zigzag)
    for s, g in assignment.items():
        _, side = shortcut_square(tuple(s))
        feat = min(feat, side * becker_feature(g.tree, params.zigzag))
    return working_tol(feat)


def phi_tol(table: Mapping[Node, bool], params: TruncationParams) -> float:
    return psi_tol(phi_assignment(table, params), params)
