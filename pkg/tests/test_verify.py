import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reslab.errors import PoleError
from reslab.hyperbolic import HalfSpacePoint
from reslab.specfn import bessel_i, bessel_k
from reslab.verify import (
    b_coefficient_gamma,
    build_coefficients,
    f_cell,
    f_envelope_log,
    random_resolvent_cases,
    recurrence_residual,
    residue_contour_check,
    verify_beta_bounds,
    verify_bessel_bounds,
    verify_boundary_identity,
    verify_coefficients,
    verify_resolvent_consistency,
    verify_wronskian,
    wronskian_residual,
)


# ---------------------------------------------------------------- coefficients

def test_c_j0_closed_form():
    for n in (1, 2, 3, 5):
        for j in range(1, 6):
            t = build_coefficients(n, j, j + 2)
            for s in (Fraction(7, 3), Fraction(-11, 5), Fraction(40)):
                assert t.entries[0](s) == 1 / (4 * j * (s - Fraction(n, 2) + j))


def test_recurrence_exact_large_range():
    for j in (1, 7, 23, 40):
        assert recurrence_residual(build_coefficients(3, j, 60)) == 0
    assert recurrence_residual(build_coefficients(4, 1, 30)) == 0


def test_recurrence_detects_corruption():
    t = build_coefficients(3, 2, 6)
    good = t.entries[3]
    t.entries[3] = good.scale([Fraction(1, 2)])
    assert recurrence_residual(t) != 0


def test_b_coefficient_matches_gamma_form():
    rng = __import__("numpy").random.default_rng(5)
    for _ in range(20):
        s = Fraction(int(rng.integers(-300, 300)), int(rng.integers(1, 50)))
        n, j, N = 3, int(rng.integers(1, 6)), int(rng.integers(6, 12))
        t = build_coefficients(n, j, N)
        try:
            exact = t.b_coefficient(s)
        except PoleError:
            continue
        ref = b_coefficient_gamma(n, j, N, s)
        with mpmath.workdps(60):
            assert abs(mpmath.mpf(exact.numerator) / exact.denominator - ref) <= mpmath.mpf(10) ** -40 * abs(ref)


def test_denominator_roots():
    t = build_coefficients(3, 2, 5)
    for k in range(4):
        # pole at s = n/2 - j - i for i <= k
        with pytest.raises(PoleError):
            t.entries[k](Fraction(3, 2) - 2 - k)


def test_boundary_identity_exact():
    for j, N in ((1, 1), (2, 9), (5, 20), (20, 20)):
        for s, xi in ((Fraction(13, 7), Fraction(5, 3)), (Fraction(-9, 4), Fraction(1, 9))):
            assert verify_boundary_identity(3, j, N, s, xi) == 0


def test_boundary_identity_binary64():
    r = verify_boundary_identity(3, 2, 8, 1.3 + 2.1j, 0.7)
    assert r < 1e-12


def test_boundary_identity_degenerate_xi():
    assert verify_boundary_identity(2, 3, 7, Fraction(5, 2), 0) == 0


def test_boundary_identity_pole():
    with pytest.raises(PoleError):
        verify_boundary_identity(3, 1, 4, Fraction(1, 2), Fraction(1))


def test_boundary_identity_detects_wrong_b():
    t = build_coefficients(3, 2, 6)
    t.entries[4] = t.entries[4].scale([Fraction(2)])
    assert verify_boundary_identity(3, 2, 6, Fraction(9, 2), Fraction(3), t) != 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.fractions(-30, 30, max_denominator=50),
       st.fractions(0, 20, max_denominator=50), st.integers(1, 6))
def test_boundary_identity_property(j, extra, s, xi, n):
    N = j + extra
    try:
        assert verify_boundary_identity(n, j, N, s, xi) == 0
    except PoleError:
        assert any(s - Fraction(n, 2) + j + i == 0 for i in range(N - j + 1))


def test_verify_coefficients_small():
    rep = verify_coefficients(j_max=4, N_max=8, pairs=5)
    assert rep.stable and rep.deficit_sup == 0


# ---------------------------------------------------------------- envelopes

def test_beta_point_example():
    # at z = 1, k = 1 the first deficit is -2 log 2
    from reslab.verify import _beta_deficits
    import numpy as np
    D1, _, _, _, _ = _beta_deficits(np.array([1.0 + 0j]), np.array([1.0]))
    assert D1[0] == pytest.approx(-2 * math.log(2))


def test_beta_report_stable_and_reproducible():
    a = verify_beta_bounds(0.6)
    b = verify_beta_bounds(0.6)
    assert a == b
    assert math.isfinite(a.deficit_sup) and a.stable


def test_fit_monotone_under_refinement():
    rep = verify_beta_bounds(0.6)
    for p in rep.details["parts"]:
        assert p["fine_fit_value"] >= p["fit_value"] - 1e-9


def test_bessel_report_small_grid():
    rep = verify_bessel_bounds(0.5)
    assert rep.details["k_symmetry_exact"]
    assert set(rep.constants) == {"K_large", "K_small", "I_large", "I_small"}
    for p in rep.details["parts"]:
        assert p["fine_fit_value"] >= p["fit_value"] - 1e-9


def test_bessel_corruption_detected():
    def bad_k(lam, x):
        return bessel_k(lam, x) * math.exp(0.01 * lam.real)
    rep = verify_bessel_bounds(0.5, bessel=(bad_k, lambda l, x: bessel_i(l, x)))
    assert not rep.stable
    assert rep.deficit_argmax


def test_f_cells():
    assert f_cell(2, 3) == "both_large"
    assert f_cell(0.5, 0.2) == "both_small"
    assert f_cell(0.5, 3) == "x_small"
    assert f_cell(3, 0.5) == "xp_small"


def test_f_envelope_continuous_across_cells():
    lam = 2.0 + 0j
    for x in (0.3, 2.0):
        lo = f_envelope_log(lam, x, 1 - 1e-12)
        hi = f_envelope_log(lam, x, 1 + 1e-12)
        assert abs(lo - hi) < math.log(10)


def test_f_envelope_continuous_in_re_lambda():
    a = f_envelope_log(complex(-1e-9, 3), 0.3, 0.4)
    b = f_envelope_log(complex(1e-9, 3), 0.3, 0.4)
    assert abs(a - b) < 1e-6


def test_f_both_large_lambda_two_finite():
    import numpy as np
    from reslab.verify import _f_deficits
    xs = np.geomspace(1, 10, 6)
    rows = _f_deficits([2.0 + 0j], xs, lambda l, x: bessel_k(l, x), lambda l, x: bessel_i(l, x))
    assert all(math.isfinite(d) for d, _, _ in rows["both_large"])


# ---------------------------------------------------------------- Wronskian and resolvent

def test_wronskian_points():
    for lam, x in ((2.5 + 0j, 1.0), (-7.3 + 4j, 0.2), (15j, 12.0), (-18 + 3j, 0.1)):
        r, _ = wronskian_residual(lam, x)
        assert r < 1e-8


def test_wronskian_small_sweep():
    rep = verify_wronskian(n_lambda=6, n_x=5)
    assert rep.stable and rep.deficit_sup < 1e-8


def test_wronskian_detects_fault():
    from reslab.specfn import bessel_ik

    def bad(lam, x, ctx=None):
        i, k = bessel_ik(lam, x)
        return i, k * (1 + 1e-3 * x)
    rep = verify_wronskian(n_lambda=3, n_x=3, bessel_pair=bad)
    assert not rep.stable


def test_resolvent_consistency_small():
    cases = [c for n in (1, 2, 3) for c in random_resolvent_cases(n, 4)]
    rep = verify_resolvent_consistency(cases)
    assert rep.stable and rep.deficit_sup < 1e-8
    assert rep.details["closed_form_deviation"] < 1e-9


@pytest.mark.parametrize("k", [0, 1, 2])
def test_residue_contour_n1(k):
    w, wp = HalfSpacePoint(0.7, (0.1,)), HalfSpacePoint(1.3, (-0.4,))
    got, want = residue_contour_check(1, k, w, wp)
    assert abs(got - want) <= 1e-6 * abs(want)


def test_residue_contour_even_n_vanishes():
    got, want = residue_contour_check(2, 1, HalfSpacePoint(0.7, (0.1, 0.2)), HalfSpacePoint(1.3, (-0.4, 0.3)))
    assert want == 0 and abs(got) < 1e-10
