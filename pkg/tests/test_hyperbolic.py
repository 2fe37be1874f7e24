import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import h3_green, harmonic_dim_bruteforce
from reslab.errors import DimensionMismatch, OffDomain, PoleError
from reslab.hyperbolic import (HalfSpacePoint, harmonic_dim, mell_kernel, residue_kernel,
                               resolvent_kernel, sigma, tau)
from reslab.quadrature import circle_trapezoid
from reslab.specfn import gamma_ratio

P = HalfSpacePoint


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


coord = st.floats(-3, 3)
height = st.floats(0.05, 5)


@st.composite
def point_pairs(draw, n):
    w = P(draw(height), tuple(draw(coord) for _ in range(n)))
    wp = P(draw(height), tuple(draw(coord) for _ in range(n)))
    return w, wp


def test_sigma_tau_examples():
    assert sigma(P(1, (0,)), P(1, (0,))) == 1
    assert sigma(P(1, (0,)), P(2, (0,))) == 9 / 8
    assert tau(P(1, (0,)), P(1, (0,))) == 1
    assert tau(P(1, (0,)), P(2, (0,))) == 5 / 4
    with pytest.raises(DimensionMismatch):
        sigma(P(1, (0,)), P(1, (0, 0)))


@settings(max_examples=50)
@given(point_pairs(2))
def test_sigma_tau_symmetry_and_identity(pair):
    w, wp = pair
    assert sigma(w, wp) == sigma(wp, w)
    assert abs(tau(w, wp) - (2 * sigma(w, wp) - 1)) <= 1e-14 * tau(w, wp)
    assert sigma(w, wp) >= 1


def test_closed_form_h3():
    s = 1.7
    d = math.acosh(5 / 4)
    ref = h3_green(s, d)
    for m in ("series", "euler", "hypergeom", "auto"):
        kv = resolvent_kernel(2, s, P(1, (0, 0)), P(2, (0, 0)), method=m)
        assert rel(kv.value, ref) < 1e-9
    assert resolvent_kernel(2, s, P(1, (0, 0)), P(2, (0, 0))).representation_used == "euler_integral"
    assert resolvent_kernel(2, 0.2, P(1, (0, 0)), P(2, (0, 0))).representation_used == "series"


def test_series_vs_euler_n3():
    xp = 1.3 + math.sqrt(1.3 ** 2 - 1)
    w, wp = P(1, (0, 0, 0)), P(xp, (0, 0, 0))
    assert tau(w, wp) == pytest.approx(1.3)
    s = 2.1 + 0.7j
    a = resolvent_kernel(3, s, w, wp, "series").value
    b = resolvent_kernel(3, s, w, wp, "euler").value
    assert rel(a, b) < 1e-8


@settings(max_examples=40, deadline=None)
@given(pair=point_pairs(2), sr=st.floats(-4, 5), si=st.floats(-3, 3))
def test_kernel_symmetry(pair, sr, si):
    w, wp = pair
    if tau(w, wp) < 1.01:
        return
    s = complex(sr, si)
    a = resolvent_kernel(2, s, w, wp).value
    b = resolvent_kernel(2, s, wp, w).value
    assert abs(a - b) <= 1e-12 * abs(a) + 1e-300


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 4), pair=st.data(), sr=st.floats(0.1, 5), si=st.floats(-3, 3))
def test_representation_agreement(n, pair, sr, si):
    w, wp = pair.draw(point_pairs(n))
    t = tau(w, wp)
    if t < 1.02 or t > 200:
        return
    s = complex((n - 1) / 2 + sr, si)
    vals = []
    for m in ("series", "euler", "hypergeom"):
        try:
            vals.append(resolvent_kernel(n, s, w, wp, m))
        except (OffDomain, PoleError):
            pass
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            a, b = vals[i], vals[j]
            bound = 2 * (a.est_rel_err + b.est_rel_err)
            assert abs(a.value - b.value) <= bound * max(abs(a.value), abs(b.value))


def test_domain_errors():
    with pytest.raises(OffDomain):
        resolvent_kernel(2, 0.3, P(1, (0, 0)), P(2, (0, 0)), "euler")
    with pytest.raises(OffDomain):
        resolvent_kernel(2, 1.3, P(1, (0, 0)), P(1, (0, 0)))
    with pytest.raises(OffDomain):
        resolvent_kernel(2, 0.3, P(1, (0, 0)), P(1.0001, (0, 0)), "series")
    with pytest.raises(PoleError):
        resolvent_kernel(1, -2 + 1e-11, P(1, (0,)), P(2, (0,)), "series")
    with pytest.raises(DimensionMismatch):
        resolvent_kernel(3, 1.3, P(1, (0, 0)), P(2, (0, 0)))


@pytest.mark.parametrize("n", [2, 4])
@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_even_n_analytic_at_nonpositive_integers(n, k):
    w, wp = P(1, (0,) * n), P(1.7, (0.4,) + (0,) * (n - 1))
    v = resolvent_kernel(n, -k, w, wp, "series").value
    assert np.isfinite(v.real) and np.isfinite(v.imag)
    # continuity through the integer point
    near = resolvent_kernel(n, -k + 1e-6, w, wp, "series").value
    assert abs(v - near) < 1e-4 * max(abs(v), 1e-3)


def _pde_residual(n, s, w, wp, h_rel=2e-3):
    def R(x, y):
        return resolvent_kernel(n, s, P(x, tuple(y)), wp).value

    x, y = w.x, np.array(w.y)
    h = h_rel * x
    c = [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12]
    c2 = [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]
    fx = [R(x + (i - 2) * h, y) for i in range(5)]
    f0 = fx[2]
    dx = sum(ci * f for ci, f in zip(c, fx)) / h
    dxx = sum(ci * f for ci, f in zip(c2, fx)) / h ** 2
    lap_y = 0
    for e in np.eye(n):
        fy = [R(x, y + (i - 2) * h * e) for i in range(5)]
        lap_y -= sum(ci * f for ci, f in zip(c2, fy)) / h ** 2
    # -(x∂x)² = -x²∂x² - x∂x
    terms = [-x * x * dxx - x * dx, n * x * dx, x * x * lap_y, -s * (n - s) * f0]
    resid = sum(terms)
    scale = max(abs(t) for t in terms)
    return abs(resid) / scale


@pytest.mark.parametrize("n,s", [(1, 0.8), (1, 2.3 + 1j), (2, 1.4 - 0.5j), (2, -0.7 + 0.3j), (3, 2.5), (3, 0.4 + 2j)])
def test_pde_residual(n, s):
    wp = P(1.2, (0.3,) + (0.0,) * (n - 1))
    for w in [P(0.7, (0.9,) + (0.1,) * (n - 1)), P(2.5, (-0.4,) + (0.0,) * (n - 1))]:
        assert tau(w, wp) > 1.1
        assert _pde_residual(n, s, w, wp) < 1e-4


# ---- residue kernel

def test_residue_examples():
    assert abs(residue_kernel(1, 0, P(1, (0,)), P(3, (2,))) - 1 / (2 * math.pi)) < 1e-15
    rng = np.random.default_rng(3)
    vals = {residue_kernel(3, 0, P(rng.uniform(0.1, 3), tuple(rng.normal(size=3))),
                           P(rng.uniform(0.1, 3), tuple(rng.normal(size=3)))) for _ in range(10)}
    assert max(abs(v - next(iter(vals))) for v in vals) < 1e-15


def test_residue_closed_forms():
    w, wp = P(1, (0,)), P(1.5, (0.7,))
    t = tau(w, wp)
    assert abs(residue_kernel(1, 1, w, wp) - t / (2 * math.pi)) < 1e-14
    assert abs(residue_kernel(1, 2, w, wp) - (3 * t * t - 1) / (4 * math.pi)) < 1e-14


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_residue_contour(k):
    w, wp = P(1, (0,)), P(1.5, (0.7,))
    c = circle_trapezoid(lambda z: resolvent_kernel(1, z, w, wp, "series").value, -k, 0.1, 64)
    assert rel(c, residue_kernel(1, k, w, wp)) < 1e-6


def test_no_residue_even_n():
    w, wp = P(1, (0, 0)), P(1.5, (0.7, 0.1))
    c = circle_trapezoid(lambda z: resolvent_kernel(2, z, w, wp, "series").value, -1, 0.1, 64)
    assert abs(c) < 1e-8


# ---- harmonic dimensions

def test_harmonic_dim_examples():
    for d in range(2, 8):
        assert harmonic_dim(d, 0) == 1
    for d in range(2, 7):
        assert harmonic_dim(d, 1) == d
    for k in range(13):
        assert harmonic_dim(3, k) == 2 * k + 1
    assert harmonic_dim(2, 5) == 2


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_harmonic_dim_bruteforce(d):
    for k in range(0, 13):
        assert harmonic_dim(d, k) == harmonic_dim_bruteforce(d, k)


# ---- boundary kernels

def test_mell_example():
    assert rel(mell_kernel(1, 1, 0, [0], P(1, (1,))), 1 / (2 * math.pi)) < 1e-14


@settings(max_examples=30)
@given(lam=st.floats(0.2, 5), sr=st.floats(0.1, 3), si=st.floats(-2, 2))
def test_mell_homogeneity(lam, sr, si):
    s = complex(sr, si)
    y, wp = np.array([0.2, -0.1]), P(0.8, (0.5, 0.3))
    base = mell_kernel(2, s, 0, [0, 0], P(wp.x, tuple(np.array(wp.y) - y)))
    scaled = mell_kernel(2, s, 0, [0, 0], P(lam * wp.x, tuple(lam * (np.array(wp.y) - y))))
    assert rel(scaled, lam ** (-s) * base) < 1e-12


@pytest.mark.parametrize("n,s", [(1, 1.3), (2, 1.3 + 0.4j), (3, 2.2 - 0.3j)])
def test_mell_ell1_finite_difference(n, s):
    wp = P(0.8, tuple([0.3, -0.2, 0.1][:n]))
    y = np.array([0.1, 0.4, -0.3][:n])
    h = 1e-2
    c2 = [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]
    lap = 0
    for e in np.eye(n):
        lap -= sum(c * mell_kernel(n, s, 0, y + (i - 2) * h * e, wp) for i, c in enumerate(c2)) / h ** 2
    ratio = 0.25 * gamma_ratio(s - n / 2 + 1, s - n / 2 + 2)
    m1 = mell_kernel(n, s, 1, y, wp)
    assert abs(m1 - ratio * lap) < 1e-6 * abs(m1)


@pytest.mark.parametrize("n,s", [(1, 1.7), (2, 1.3 + 0.4j), (3, 2.6)])
def test_mell_boundary_expansion(n, s):
    # x^{-s} R0 = M0 + x² M1 + x⁴ M2 + O(x⁶): check the x⁴ coefficient by extrapolation
    wp = P(1.3, tuple([0.4, 0.2, -0.1][:n]))
    y = np.zeros(n)
    M = [mell_kernel(n, s, ell, y, wp) for ell in range(3)]
    xs = [0.02, 0.04]
    est = []
    for x in xs:
        r = x ** (-s) * resolvent_kernel(n, s, P(x, tuple(y)), wp).value
        est.append((r - M[0] - x * x * M[1]) / x ** 4)
    m2 = (4 * est[0] - est[1]) / 3
    assert abs(m2 - M[2]) < 1e-4 * abs(M[2])


def test_mell_pole():
    with pytest.raises(PoleError):
        mell_kernel(1, -1 + 1e-12, 0, [0], P(1, (1,)))
    # both gammas singular for even n: the ratio stays finite
    v = mell_kernel(2, -1, 0, [0, 0], P(1, (1, 0)))
    assert np.isfinite(abs(v))
