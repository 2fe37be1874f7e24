"""Modified Bessel functions of complex order and the Wronskian identity.

Run: python demos/02_bessel_complex_order.py
"""
from reslab.specfn import PrecisionContext, bessel_i, bessel_k
from reslab.verify import wronskian_residual

for lam, x in ((0.5 + 0j, 1.0), (3 + 4j, 2.0), (-7.3 + 4j, 0.2), (15j, 12.0)):
    k, i = bessel_k(lam, x), bessel_i(lam, x)
    r, bits = wronskian_residual(lam, x)
    print(f"lambda={lam!s:<12} x={x:<5} K={k:.6e} I={i:.6e}  Wronskian residual {r:.1e} at {bits} bits")

print("\nK is even in the order, bit for bit:", bessel_k(2 + 3j, 1.5) == bessel_k(-2 - 3j, 1.5))
ctx = PrecisionContext("arbitrary", 200)
print("K_{3+4i}(2) at 200 bits:", bessel_k(3 + 4j, 2.0, ctx))
