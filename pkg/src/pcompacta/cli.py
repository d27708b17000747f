"""The ``pc`` command line.

Exit codes: 0 success, 2 usage or format error, 3 infinite or negative
result, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import math
import sys

from .constructions import (BRIDGE_NOTE, MAX_DEPTH, ConstructionError, FiniteTree, Gadget, TruncationParams,
                            becker_set, becker_tol, comb_P, comb_tol, node_name, phi_assignment, psi,
                            psi_tol, regularize)
from .fileformats import (FormatError, GeometryDocument, load, load_assignment, load_tree, parse_tree,
                          save)
from .geometry import TOL, GeometryError, close
from .metric import DeltaBudgetExceeded, arc_components, delta, eps_components, node_budget, planarize
from .svg import render_svg
from .triods import (MooreViolation, TriodError, detect_triods, find_rational_trap, is_weakly_compatible,
                     moore_intersect, restrict_to_trap)

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_INVARIANT = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _params(args, bridges=frozenset()) -> TruncationParams:
    if args.depth > MAX_DEPTH:
        raise UsageError(f"--depth {args.depth} exceeds cap {MAX_DEPTH}")
    return TruncationParams(args.depth, args.zigzag, bridges)


def _psi_assignment(raw: dict) -> dict:
    out = {}
    for node, lines in raw.items():
        if isinstance(lines, list):
            lines = "\n".join(str(x) for x in lines)
        if not isinstance(lines, str):
            raise FormatError(f"assignment for {node}: expected tree lines")
        tree, bridges = parse_tree(lines)
        out[node] = Gadget(tree, bridges)
    return out


def cmd_gen(args) -> int:
    meta = {"generator": args.kind, "depth": args.depth, "zigzag": args.zigzag, "note": BRIDGE_NOTE}
    if args.kind == "becker":
        tree, bridges = load_tree(args.tree) if args.tree else (FiniteTree.root_only(), frozenset())
        params = _params(args, bridges)
        c = becker_set(tree, params)
        tol = becker_tol(tree, params)
        meta["tree"] = [node_name(s) for s in tree.sorted()]
        meta["bridges"] = sorted(node_name(s) for s in bridges)
    elif args.kind == "comb":
        _params(args)
        c = comb_P(args.depth, args.zigzag)
        tol = comb_tol(args.depth, args.zigzag)
    else:
        if not args.assign:
            raise UsageError(f"gen {args.kind} needs --assign")
        params = _params(args)
        raw = load_assignment(args.assign)
        if args.kind == "psi":
            assignment = _psi_assignment(raw)
            meta["assignment"] = {node_name(s): {"tree": [node_name(t) for t in g.tree.sorted()],
                                                 "bridges": sorted(node_name(t) for t in g.bridges)}
                                  for s, g in sorted(assignment.items())}
        else:
            if not all(isinstance(v, bool) for v in raw.values()):
                raise FormatError("phi assignment values must be booleans")
            assignment = phi_assignment(raw, params)
            meta["table"] = {node_name(s): v for s, v in sorted(raw.items())}
            meta["regularized"] = {node_name(s): v for s, v in sorted(regularize(raw).items())}
            meta["bridged"] = [node_name(s) for s, g in sorted(assignment.items()) if g.bridges]
        c = psi(assignment, params)
        tol = psi_tol(assignment, params)
    meta["tolerance"] = tol
    save(GeometryDocument.from_complex(c, meta), args.output)
    print(f"wrote {args.output}: {len(c.points)} points, {len(c.segments)} segments")
    return EXIT_OK


def _open(path: str):
    """Load a document and the identification tolerance its geometry was built for."""
    doc = load(path)
    tol = doc.metadata.get("tolerance", TOL)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not 0 < tol <= TOL:
        raise FormatError(f"metadata tolerance must lie in (0, {TOL}], got {tol!r}")
    return doc.to_complex(), float(tol)


def _resolve(g, c, ref: str, tol: float) -> int:
    if ref in g.labels:
        return g.labels[ref]
    try:
        xy = tuple(float(v) for v in ref.split(","))
    except ValueError:
        raise UsageError(f"unknown label {ref!r}") from None
    if len(xy) != 2:
        raise UsageError(f"expected LABEL or x,y, got {ref!r}")
    # prefer a label sitting on the requested coordinates
    for name in sorted(c.labels):
        if close(c.label_point(name), xy, tol):
            return g.labels[name]
    try:
        return g.vertex(xy, tol)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def cmd_delta(args) -> int:
    c, tol = _open(args.input)
    g = planarize(c, tol)
    x, y = _resolve(g, c, args.source, tol), _resolve(g, c, args.target, tol)
    try:
        budget = node_budget()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        res = delta(g, x, y, budget)
    except DeltaBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    if not math.isfinite(res.value):
        print("value: inf")
        print("witness: none")
        print(f"expanded: {res.expanded}")
        return EXIT_NEGATIVE
    print(f"value: {res.value!r}")
    print("witness: " + " ".join(str(v) for v in res.witness.vertices))
    for v in res.witness.vertices:
        p = g.vertices[v]
        print(f"  {v}: {p.x!r} {p.y!r}")
    print(f"expanded: {res.expanded}")
    return EXIT_OK


def cmd_triods(args) -> int:
    c, tol = _open(args.input)
    g = planarize(c, tol)
    triods = detect_triods(g)
    print(f"{len(triods)} triods")
    for k, t in enumerate(triods):
        print(f"triod {k}: center {t.center.x!r} {t.center.y!r} vertex {t.center_index} "
              f"degree {g.degree(t.center_index)}")
    return EXIT_OK


def cmd_trapcheck(args) -> int:
    if not args.eps > 0:
        raise UsageError("--eps must be positive")
    c, tol = _open(args.input)
    triods = detect_triods(planarize(c, tol))
    traps = []
    for k, t in enumerate(triods):
        try:
            p = find_rational_trap(t, args.eps, tol)
        except TriodError as exc:
            print(f"triod {k}: {exc}")
            return EXIT_NEGATIVE
        ok = is_weakly_compatible(t, p, tol)
        print(f"triod {k}: trap center {p.center[0]} {p.center[1]} radius {p.radius} "
              f"{'weakly compatible' if ok else 'NOT weakly compatible'}")
        if not ok:
            return EXIT_INVARIANT
        traps.append(p)
    # every other triod caught by a trap must meet the triod that trap was built for
    meets = 0
    for k, p in enumerate(traps):
        own = restrict_to_trap(triods[k], p, tol)
        for j, other in enumerate(triods):
            if j != k and is_weakly_compatible(other, p, tol):
                moore_intersect(own, restrict_to_trap(other, p, tol), p, tol)
                meets += 1
    print(f"{len(triods)} triods, {len(traps)} traps, {meets} shared-trap pairs, all checks pass")
    return EXIT_OK


def cmd_components(args) -> int:
    c, tol = _open(args.input)
    if args.eps is None:
        g = planarize(c, tol)
        groups = arc_components(g)
        label_of = g.labels
    else:
        if not args.eps > 0:
            raise UsageError("--eps must be positive")
        groups = eps_components(c, args.eps, args.eps / 4)
        label_of = c.labels
    where = {v: k for k, grp in enumerate(groups) for v in grp}
    print(f"components: {len(groups)}")
    by_comp: dict[int, list[str]] = {}
    for name, v in sorted(label_of.items()):
        by_comp.setdefault(where[v], []).append(name)
    for k in sorted(by_comp):
        print(f"component {k}: " + " ".join(by_comp[k]))
    return EXIT_OK


def cmd_svg(args) -> int:
    if not args.stroke > 0:
        raise UsageError("--stroke must be positive")
    c = load(args.input).to_complex()
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(c, args.stroke))
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pc", description="Arc-connected planar compacta toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a construction")
    g.add_argument("kind", choices=["becker", "comb", "psi", "phi"])
    g.add_argument("--tree", help="tree file, or the word 'empty'")
    g.add_argument("--assign", help="JSON assignment for psi/phi")
    g.add_argument("--depth", type=int, default=3)
    g.add_argument("--zigzag", type=int, default=3)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("delta", help="least path diameter between two points")
    d.add_argument("input")
    d.add_argument("--from", dest="source", required=True)
    d.add_argument("--to", dest="target", required=True)
    d.set_defaults(func=cmd_delta)

    t = sub.add_parser("triods", help="list simple triods")
    t.add_argument("input")
    t.set_defaults(func=cmd_triods)

    tc = sub.add_parser("trap-check", help="build and check rational traps for every triod")
    tc.add_argument("input")
    tc.add_argument("--eps", type=float, required=True)
    tc.set_defaults(func=cmd_trapcheck)

    c = sub.add_parser("components", help="arc or eps-chain components")
    c.add_argument("input")
    c.add_argument("--eps", type=float)
    c.set_defaults(func=cmd_components)

    s = sub.add_parser("svg", help="render to SVG")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--stroke", type=float, default=0.002)
    s.set_defaults(func=cmd_svg)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MooreViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (GeometryError, TriodError) as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
