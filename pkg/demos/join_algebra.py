"""Partial joins of arcs: a worked chain and a shrinking staircase.

Run: python3 demos/join_algebra.py
"""
from pcompacta.arcs import OrientedPolyArc, fold_vee, lim_vee, vee

A = OrientedPolyArc.from_points

# The second arc doubles back across the first one.  vee walks the first arc
# until it meets the second, then follows the second to its far end.
i0 = A([(0, 0), (2, 0)])
i1 = A([(2, 0), (2, 1), (1, 1), (1, -1)])
print("vee:", vee(i0, i1).points)

# A staircase of L shapes shrinking towards (1, 1).
corners = [(1 - 2.0 ** -n, 1 - 2.0 ** -n) for n in range(25)]
seq = [A([corners[n], (corners[n + 1][0], corners[n][1]), corners[n + 1]]) for n in range(24)]
j = fold_vee(seq)
print(f"fold of {len(seq)} arcs has {len(j.points)} vertices, ends at {j.e1}")

j, cert = lim_vee(seq, (1, 1), tol=1e-6)
print("certificate ok:", cert.ok, " endpoint error:", cert.endpoint_error)
for n in (0, 5, 10, 20):
    print(f"  n={n:2d}  d_H(J_n, J_N) <= {cert.tail[n] + cert.slack[n]:.3e}   bound {cert.bounds[n]:.3e}")
