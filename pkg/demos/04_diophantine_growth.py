"""How the rotation angle of a cusp controls the growth function Λ(u).

Run: python demos/04_diophantine_growth.py
"""
from reslab.cusp import AngleSpec, make_group
from reslab.dioph import (WorstCaseSpec, check_diophantine, lambda_growth, loglog_slope, worst_case_angle,
                          worst_case_group)

golden = AngleSpec.decimal("0.6180339887498948482045868343656381177203091798", 160)
cusps = {
    "no rotation": make_group(3, [["0/1"]], [[6.283185307179586]]),
    "rotation 2π/7": make_group(3, [["1/7"]], [[1.0]]),
    "golden rotation": make_group(3, [[golden]], [[1.0]]),
}
for name, g in cusps.items():
    vals = [lambda_growth(g, u)[0] for u in (10, 100, 1000)]
    rep = check_diophantine(g, 2000)
    print(f"{name:<16} Λ(10,100,1000) = {vals[0]:9.1f} {vals[1]:9.1f} {vals[2]:10.1f}"
          f"   fitted b(m) ~ {rep.c_fit:.2f} m^-{rep.gamma_fit:.2f}")

spec = WorstCaseSpec(q=1, depth=4)
_, rows, _ = worst_case_angle(spec)
print("\nworst-case angle a = 2, 4, 16, 65536:")
for r in rows:
    print(f"  m={r.m:<3} j={r.j:<4} computed/predicted b = {float(r.computed_b / r.predicted_b):.12f}")
g = worst_case_group(spec)
for us in ([16, 256, 65536], [8, 32]):
    vals = [lambda_growth(g, u)[0] for u in us]
    print(f"  Λ at u={us}: {[round(v, 1) for v in vals]}, log-log slope {loglog_slope(us, vals):.3f}")
print("  (at u = a_k the small b(a_k) carries zero weight; near u = 2 a_k it dominates)")
