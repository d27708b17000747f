"""Finite polygonal models of arc-connected planar compacta."""
from .geometry import TOL, PlanarComplex, Point, PolyArc, Segment, hausdorff, seg_intersect
from .arcs import OrientedPolyArc, fold_vee, lim_vee, vee
from .metric import EmbeddedGraph, arc_components, delta, planarize
from .triods import SimpleTriod, TriodTrap, detect_triods
from .constructions import FiniteTree, TruncationParams, becker_set, comb_P, psi, reduction_phi

__all__ = ["TOL", "PlanarComplex", "Point", "PolyArc", "Segment", "hausdorff", "seg_intersect",
           "OrientedPolyArc", "fold_vee", "lim_vee", "vee", "EmbeddedGraph", "arc_components", "delta",
           "planarize", "SimpleTriod", "TriodTrap", "detect_triods", "FiniteTree", "TruncationParams",
           "becker_set", "comb_P", "psi", "reduction_phi"]
