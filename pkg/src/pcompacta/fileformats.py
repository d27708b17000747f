"""Geometry JSON documents and plain-text tree files.

Geometry documents are written by hand rather than through ``json.dump`` so
that each point and segment sits on its own line; floats use ``repr`` (the
shortest string that round-trips), so load(save(doc)) is bit-exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .constructions import FiniteTree
from .geometry import GeometryError, PlanarComplex

VERSION = "1"


class FormatError(ValueError):
    pass


@dataclass
class GeometryDocument:
    points: list
    segments: list
    labels: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    version: str = VERSION

    @classmethod
    def from_complex(cls, c: PlanarComplex, metadata: dict | None = None) -> "GeometryDocument":
        return cls([[p.x, p.y] for p in c.points], [list(s) for s in c.segments],
                   dict(sorted(c.labels.items())), dict(metadata or {}))

    def to_complex(self) -> PlanarComplex:
        try:
            return PlanarComplex(tuple(tuple(p) for p in self.points),
                                 tuple(tuple(s) for s in self.segments), dict(self.labels))
        except GeometryError as exc:
            raise FormatError(f"invalid geometry: {exc}") from None


def _num(x: float) -> str:
    return repr(float(x))


def dumps(doc: GeometryDocument) -> str:
    lines = ["{", f'  "version": {json.dumps(doc.version)},', '  "points": [']
    lines += [f"    [{_num(x)}, {_num(y)}]" + ("," if k < len(doc.points) - 1 else "")
              for k, (x, y) in enumerate(doc.points)]
    lines.append("  ],")
    lines.append('  "segments": [')
    lines += [f"    [{int(i)}, {int(j)}]" + ("," if k < len(doc.segments) - 1 else "")
              for k, (i, j) in enumerate(doc.segments)]
    lines.append("  ],")
    lines.append(f'  "labels": {json.dumps(dict(sorted(doc.labels.items())), sort_keys=True)},')
    lines.append(f'  "metadata": {json.dumps(doc.metadata, sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save(doc: GeometryDocument, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))


def _reject_constant(name):
    raise FormatError(f"non-finite number {name} in document")


def loads(text: str) -> GeometryDocument:
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise FormatError("document must be a JSON object")
    missing = {"version", "points", "segments"} - raw.keys()
    if missing:
        raise FormatError(f"document lacks {sorted(missing)}")
    if raw["version"] != VERSION:
        raise FormatError(f"unsupported version {raw['version']!r}")
    pts = []
    for p in raw["points"]:
        if (not isinstance(p, list) or len(p) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in p)):
            raise FormatError(f"bad point {p!r}")
        if not all(math.isfinite(v) for v in p):
            raise FormatError(f"non-finite point {p!r}")
        pts.append([float(p[0]), float(p[1])])
    segs = []
    for s in raw["segments"]:
        if not isinstance(s, list) or len(s) != 2 or not all(type(v) is int for v in s):
            raise FormatError(f"bad segment {s!r}")
        if not all(0 <= v < len(pts) for v in s):
            raise FormatError(f"segment {s!r} references a missing point")
        segs.append([s[0], s[1]])
    labels = raw.get("labels", {})
    if not isinstance(labels, dict):
        raise FormatError("labels must be an object")
    for name, idx in labels.items():
        if type(idx) is not int or not 0 <= idx < len(pts):
            raise FormatError(f"label {name!r} references a missing point")
    meta = raw.get("metadata", {})
    if not isinstance(meta, dict):
        raise FormatError("metadata must be an object")
    doc = GeometryDocument(pts, segs, dict(labels), meta, raw["version"])
    doc.to_complex()
    return doc


def load(path: str) -> GeometryDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


# ---- tree files ----------------------------------------------------------------

def parse_tree(text: str) -> tuple[FiniteTree, frozenset]:
    """Parse tree lines: integers per node, a trailing ``!`` flags a bridge.

    Blank lines and ``#`` comments are ignored; missing ancestors are added.
    A line holding only ``!`` flags the root.
    """
    nodes, bridges = [], set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        bridged = line.endswith("!")
        if bridged:
            line = line[:-1].strip()
        try:
            node = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise FormatError(f"tree line {lineno}: expected integers, got {line!r}") from None
        if any(n < 0 for n in node):
            raise FormatError(f"tree line {lineno}: negative label")
        nodes.append(node)
        if bridged:
            bridges.add(node)
    return FiniteTree.from_nodes(nodes), frozenset(bridges)


def format_tree(tree: FiniteTree, bridges=frozenset()) -> str:
    lines = []
    for s in tree.sorted():
        if not s and s not in bridges:
            continue
        text = " ".join(str(n) for n in s)
        lines.append((text + " !").strip() if s in bridges else text)
    return "\n".join(lines) + ("\n" if lines else "")


def load_tree(arg: str) -> tuple[FiniteTree, frozenset]:
    if arg == "empty":
        return FiniteTree.root_only(), frozenset()
    try:
        with open(arg, encoding="utf-8") as fh:
            return parse_tree(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {arg}: {exc.strerror}") from None


def parse_node_key(key: str) -> tuple:
    try:
        node = tuple(int(tok) for tok in key.split())
    except ValueError:
        raise FormatError(f"bad node key {key!r}") from None
    if any(n < 0 for n in node):
        raise FormatError(f"bad node key {key!r}")
    return node


def load_assignment(path: str) -> dict[tuple, Any]:
    """JSON object keyed by space-separated node labels."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed assignment JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise FormatError("assignment must be a JSON object")
    return {parse_node_key(k): v for k, v in raw.items()}
