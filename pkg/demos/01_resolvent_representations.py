"""The model resolvent kernel on H^{n+1} computed three ways, plus its residues.

Run: python demos/01_resolvent_representations.py
"""
import math

from reslab.hyperbolic import HalfSpacePoint, residue_kernel, resolvent_kernel, tau
from reslab.verify import h3_green, residue_contour_check

w = HalfSpacePoint(0.8, (0.3, -0.2))
wp = HalfSpacePoint(1.9, (-0.5, 0.4))
s = 1.7 + 0.9j
print(f"points at tau = {tau(w, wp):.6f}, s = {s}")
for method in ("euler", "series", "hypergeom"):
    kv = resolvent_kernel(2, s, w, wp, method=method)
    print(f"  {method:<10} {kv.value:.15e}  (est. rel. err {kv.est_rel_err:.1e})")
print(f"  closed form {h3_green(s, math.acosh(tau(w, wp))):.15e}")

print("\nodd n has poles at s = -k; the contour integral reproduces the residue kernel:")
a, b = HalfSpacePoint(0.7, (0.1,)), HalfSpacePoint(1.3, (-0.4,))
for k in range(3):
    got, want = residue_contour_check(1, k, a, b)
    print(f"  k={k}: contour {got.real:.12f}  formula {residue_kernel(1, k, a, b).real:.12f}")
got, _ = residue_contour_check(2, 1, w, wp)
print(f"even n is entire: contour integral around s=-1 is {abs(got):.1e}")
