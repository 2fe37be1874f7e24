"""A rank-one cusp rotating by 2π/3: holonomy classes, modes, and the zero-mode kernel.

Run: python demos/03_cusp_modes.py
"""
import math

from reslab.cusp import Mode, enumerate_modes, holonomy_angles, make_group, min_positive_b, mode_resolvent_kernel
from reslab.hyperbolic import resolvent_kernel

g = make_group(3, [["1/3"]], [[1.0]])
for m in range(3):
    classes = holonomy_angles(g, m)
    print(f"degree {m}: " + ", ".join(f"{c.turns[0]} turn(s) x{c.multiplicity}" for c in classes))

modes = enumerate_modes(g, 2, 8.0)
print(f"\n{len(modes)} modes with m <= 2 and b <= 8; the smallest positive b per degree:")
for m in range(1, 4):
    b, mode = min_positive_b(g, m)
    print(f"  m={m}: b={b:.6f} at v*={mode.vstar}")

mode = min_positive_b(g, 1)[1]
kv = mode_resolvent_kernel(g, mode, 2.2, 1.0, 0.6, 1.7, 1.2)
print(f"\nmode kernel at s=2.2: {kv.value:.10e} (est. rel. err {kv.est_rel_err:.1e})")

# the b = 0, m = 0 sector is the lower-dimensional resolvent averaged over the fiber circle
flat = make_group(3, [[]], [[1.0]])
zero = Mode(0, 0, (0,), (0,), 0.0)
x, r, xp, rp, s = 1.0, 0.7, 1.6, 1.1, 2.2
val = mode_resolvent_kernel(flat, zero, s, x, r, xp, rp).value
N = 400
avg = sum(resolvent_kernel(2, s - 0.5, (x, r, 0.0),
                           (xp, rp * math.cos(2 * math.pi * j / N), rp * math.sin(2 * math.pi * j / N))).value.real
          for j in range(N)) * 2 * math.pi / N / (x * xp)
print(f"zero-mode kernel {val:.10f} vs fiber average of the H^3 resolvent {avg:.10f}")
