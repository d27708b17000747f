"""Path lengths through the comb and what a branch of bridged gadgets saves.

Run: python3 demos/comb_and_shortcuts.py [out_dir]
Writes comb.svg and shortcut.svg to out_dir (default: the current directory).
"""
import os
import sys

from pcompacta.constructions import (FiniteTree, Gadget, TruncationParams, comb_P, comb_tol, node_name, psi,
                                     psi_tol)
from pcompacta.metric import min_path_length, planarize
from pcompacta.svg import render_svg

D, N = 3, 2
out = sys.argv[1] if len(sys.argv) > 1 else "."
params = TruncationParams(D, N)

comb = comb_P(D, N)
g = planarize(comb, comb_tol(D, N))
top = g.labels["a_hat_root"]
branch = (1, 0, 2)
print("no shortcuts:")
for k in range(D + 1):
    s = branch[:k]
    d = min_path_length(g, top, g.labels[f"b_hat_{node_name(s)}"])
    print(f"  to tooth top {node_name(s):>6}: {d:.4f}  (at least {2 / 3 * (k + 1):.4f})")

# bridge a one-node gadget at every node along the branch
assignment = {branch[:k]: Gadget(FiniteTree.root_only(), frozenset({()})) for k in range(1, D + 1)}
fast_c = psi(assignment, params)
fast = planarize(fast_c, psi_tol(assignment, params))
print("bridged along", node_name(branch) + ":")
for k in range(D + 1):
    name = f"b_hat_{node_name(branch[:k])}"
    before = min_path_length(g, top, g.labels[name])
    after = min_path_length(fast, fast.labels["a_hat_root"], fast.labels[name])
    print(f"  {name:>12}: {after:.4f}  saves {before - after:.4f}")

for name, c in (("comb.svg", comb), ("shortcut.svg", fast_c)):
    with open(os.path.join(out, name), "w") as fh:
        fh.write(render_svg(c, 0.001))
print("wrote comb.svg and shortcut.svg to", out)
