"""Component law of the Becker set, then triods and traps in a comb.

Run: python3 demos/becker_and_triods.py
"""
from pcompacta.constructions import FiniteTree, TruncationParams, becker_set, becker_tol, comb_P, comb_tol
from pcompacta.metric import arc_components, planarize
from pcompacta.triods import detect_triods, find_rational_trap, is_weakly_compatible

tree = FiniteTree.from_nodes([(), (0,), (1,), (1, 0), (1, 2)])
for bridges in (frozenset(), frozenset({(1, 2)})):
    params = TruncationParams(3, 2, bridges)
    g = planarize(becker_set(tree, params), becker_tol(tree, params))
    comps = arc_components(g)
    where = {v: k for k, c in enumerate(comps) for v in c}
    same = where[g.labels["a_hat_root"]] == where[g.labels["corner_root"]]
    print(f"bridged leaves {sorted(bridges)}: {len(comps)} components, (0,1)~(1,0): {same}")

g = planarize(comb_P(2, 1), comb_tol(2, 1))
triods = detect_triods(g)
print(f"comb(2, 1) has {len(triods)} simple triods")
for t in triods[:3]:
    p = find_rational_trap(t, 0.01)
    print(f"  center {tuple(t.center)} trap radius {p.radius} weakly compatible: {is_weakly_compatible(t, p)}")
