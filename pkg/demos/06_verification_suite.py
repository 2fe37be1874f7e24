"""Exact coefficient identities and bounded-deficit checks of the special-function envelopes.

Run: python demos/06_verification_suite.py   (about 30 s)
"""
from fractions import Fraction

from reslab.verify import (build_coefficients, recurrence_residual, verify_bessel_bounds, verify_beta_bounds,
                           verify_boundary_identity, verify_f_bound)

t = build_coefficients(3, 2, 6)
print("c_{2,0}(s) at s = 7/3:", t.entries[0](Fraction(7, 3)))
print("recurrence residual:", recurrence_residual(t))
print("boundary identity residual (exact):", verify_boundary_identity(3, 2, 6, Fraction(7, 3), Fraction(5, 2)))
print("boundary identity residual (binary64):", verify_boundary_identity(3, 2, 8, 1.3 + 2.1j, 0.7))

for fn in (verify_beta_bounds, verify_bessel_bounds, verify_f_bound):
    rep = fn()
    print(f"\n{rep.grid_spec['suite']}: stable={rep.stable} deficit_sup={rep.deficit_sup:.3f}")
    for p in rep.details["parts"]:
        print(f"  {p['name']:<11} c={p['c']:.3f} log C={p['logC']:.3f} refinement growth={p['growth']:.4f}")
