"""Resonance counts of the model space and the canonical product with prescribed zeros.

Run: python demos/05_counting_and_canonical_product.py
"""
from reslab.counting import (canonical_growth_sup, canonical_product, canonical_zero_multiplicity,
                             counting_curve, hyperbolic_resonances, zero_count_disk)

pts, (R, N) = hyperbolic_resonances(1, 2.6)
print(f"H^2: {N} resonances within distance {R} of 1/2:", [(int(p.location.real), p.multiplicity) for p in pts])
for n in (1, 3):
    curve = counting_curve(n, [50, 100, 200, 400])
    print(f"n={n}: N(R)/R^(n+1) =", [round(c / r ** (n + 1), 5) for r, c in curve.samples])

for n in (1, 2):
    sup = canonical_growth_sup(n, 1, 242)
    logg = lambda s, n=n: canonical_product(s, 1, n, 242).log_value
    z0 = zero_count_disk(logg, 0, 0.2, log=True).count
    z1 = zero_count_disk(logg, -1, 0.2, log=True).count
    print(f"n={n}: sup log|g|/<s>^(n+1) = {sup.sup:.3f}; zeros at 0: {z0}, at -1: {z1}"
          f" (enumerated {canonical_zero_multiplicity(-1, 1, n, 242)})")
