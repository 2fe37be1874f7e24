"""Explicit kernels on hyperbolic space H^{n+1} in the half-space model."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DimensionMismatch, OffDomain, PoleError
from .quadrature import EPS, tanh_sinh_01
from .specfn import gamma_ratio, gauss_2f1, log_gamma_rounding, rgamma

DEFAULT_POLE_TOL = 1e-9
SERIES_MIN_TAU = 1.0 + 1e-3


@dataclass(frozen=True)
class HalfSpacePoint:
    """Point (x, y) of R+ x R^n with x the height above the boundary."""

    x: float
    y: tuple = ()

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError("half-space points need x > 0")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in np.atleast_1d(self.y)))

    @property
    def n(self) -> int:
        return len(self.y)


def _pt(w):
    if isinstance(w, HalfSpacePoint):
        return w
    w = tuple(w)
    return HalfSpacePoint(w[0], w[1:])


def _dy2(w, wp):
    if w.n != wp.n:
        raise DimensionMismatch(f"points live in different dimensions ({w.n} vs {wp.n})")
    return sum((a - b) ** 2 for a, b in zip(w.y, wp.y))


def sigma(w, wp) -> float:
    """cosh²(d/2) = ((x+x')² + |y-y'|²)/(4xx')."""
    w, wp = _pt(w), _pt(wp)
    return ((w.x + wp.x) ** 2 + _dy2(w, wp)) / (4 * w.x * wp.x)


def tau(w, wp) -> float:
    """cosh d = (x² + x'² + |y-y'|²)/(2xx')."""
    w, wp = _pt(w), _pt(wp)
    return (w.x ** 2 + wp.x ** 2 + _dy2(w, wp)) / (2 * w.x * wp.x)


def _sigma_minus_one(w, wp):
    # (x-x')² + |y-y'|² over 4xx', without cancellation near the diagonal
    return ((w.x - wp.x) ** 2 + _dy2(w, wp)) / (4 * w.x * wp.x)


class KernelValue(NamedTuple):
    value: complex
    est_rel_err: float
    representation_used: str


def _near_nonpositive_int(s, tol):
    r = round(s.real)
    return r <= 0 and abs(s - r) < tol


def _series(n, s, t, tol):
    # Σ_j 2^{-2j} Γ(s+2j)/(Γ(s-n/2+1+j) j!) τ^{-s-2j}, times π^{-n/2} 2^{-s-1}
    inv_t2 = 1.0 / (t * t)
    log_t = math.log(t)

    def direct(j):
        return gamma_ratio(s + 2 * j, s - n / 2 + 1 + j) * math.exp(-math.lgamma(j + 1) - 2 * j * math.log(2)) \
            * cmath.exp(-(s + 2 * j) * log_t)

    term = direct(0)
    total = term
    weight = abs(term)
    small = 0
    j = 0
    while True:
        num = (s + 2 * j) * (s + 2 * j + 1)
        den = 4 * (j + 1) * (s - n / 2 + 1 + j)
        if term == 0 or abs(num) < 1e-12 or abs(den) < 1e-12:
            term = direct(j + 1)
        else:
            term = term * num / den * inv_t2
        total += term
        weight += (j + 2) * abs(term)
        j += 1
        # past j ~ |s| the ratio is below ~1/τ² and the tail is geometric
        ratio = inv_t2 * (1 + (abs(s) + 2) / (j + 1)) ** 2 if j > abs(s) else 1.0
        if ratio < 1 and abs(term) * ratio / (1 - ratio) < tol * abs(total):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if j > 200000:
            raise ConvergenceError("resolvent series did not converge")
    pref = math.pi ** (-n / 2) * cmath.exp(-(s + 1) * math.log(2))
    err = tol + 2 * EPS * weight / max(abs(total), 1e-300) + EPS * (abs(s) + 2) * (1 + abs(log_t)) \
        + log_gamma_rounding(s, s - n / 2 + 1)
    return pref * total, err


def _hypergeom(n, s, sig, tol):
    from .specfn import PrecisionContext
    a = s
    b = s - (n - 1) / 2
    c = 2 * s - n + 1
    res = gauss_2f1(a, b, c, 1.0 / sig, ctx=PrecisionContext(target_rel_err=tol),
                    method="series", full_output=True)
    pref = math.pi ** (-n / 2) * cmath.exp(-(2 * s + 1) * math.log(2)) * gamma_ratio(s, s - n / 2 + 1) \
        * cmath.exp(-s * math.log(sig))
    err = res.est_rel_err + log_gamma_rounding(s, s - n / 2 + 1) + EPS * (abs(s) * (2 + abs(math.log(sig))) + 4)
    return pref * res.value, err


def _euler(n, s, sig, sig_m1, tol):
    e = s - (n + 1) / 2

    def logf(log_t, log_1mt):
        # σ - t = (σ - 1) + (1 - t), accurate near both ends
        return e * (log_t + log_1mt) - s * np.log(sig_m1 + np.exp(log_1mt))

    integral, abs_err = tanh_sinh_01(logf, tol=tol)
    pref = math.pi ** (-(n + 1) / 2) * 2.0 ** (-n - 1) * gamma_ratio(s, s - (n - 1) / 2)
    err = abs_err / max(abs(integral), 1e-300) + log_gamma_rounding(s, s - (n - 1) / 2) \
        + EPS * (abs(s) * (1 + abs(math.log(sig))) + 4)
    return pref * integral, err


def resolvent_kernel(n: int, s, w, wp, method: str = "auto", rtol: float = 1e-12,
                     pole_tol: float = DEFAULT_POLE_TOL) -> KernelValue:
    """Resolvent kernel R0(s; w, w') of the Laplacian on H^{n+1}.

    ``method`` picks the representation: ``series`` (power series in 1/τ),
    ``euler`` (integral over [0, 1]), ``hypergeom`` (2F1 series in 1/σ) or
    ``auto`` (euler when Re s > (n-1)/2, else series).
    """
    w, wp = _pt(w), _pt(wp)
    if w.n != n or wp.n != n:
        raise DimensionMismatch(f"expected points in H^{n + 1}")
    s = complex(s)
    sig_m1 = _sigma_minus_one(w, wp)
    if sig_m1 == 0:
        raise OffDomain("kernel is singular on the diagonal")
    sig = 1.0 + sig_m1
    t = 1.0 + 2 * sig_m1
    euler_ok = s.real > (n - 1) / 2
    series_ok = t >= SERIES_MIN_TAU
    if method == "auto":
        if euler_ok:
            method = "euler"
        elif series_ok:
            method = "series"
        else:
            method = "hypergeom"
    tol = 0.01 * rtol
    if method == "euler":
        if not euler_ok:
            raise OffDomain(f"euler representation needs Re s > {(n - 1) / 2}")
        val, err = _euler(n, s, sig, sig_m1, tol)
        rep = "euler_integral"
    elif method in ("series", "hypergeom"):
        if n % 2 == 1 and _near_nonpositive_int(s, pole_tol):
            raise PoleError(f"R0 has a pole at s={s} for odd n")
        if method == "series":
            if not series_ok:
                raise OffDomain("series representation needs tau >= 1 + 1e-3")
            val, err = _series(n, s, t, tol)
            rep = "series"
        else:
            c = 2 * s - n + 1
            if _near_nonpositive_int(s, pole_tol) or _near_nonpositive_int(c, pole_tol):
                raise OffDomain("hypergeometric prefactor or parameter is singular here")
            val, err = _hypergeom(n, s, sig, tol)
            rep = "hypergeom_series"
    else:
        raise ValueError(f"unknown method {method!r}")
    if err > rtol:
        raise ConvergenceError(f"{rep}: estimated error {err:.2e} exceeds {rtol:.1e}")
    return KernelValue(val, err, rep)


def residue_kernel(n: int, k: int, w, wp) -> complex:
    """Kernel of the residue of R0 at s = -k for odd n (a polynomial in cosh d)."""
    if n % 2 == 0:
        raise ValueError("residue kernel is defined for odd n")
    c = tau(w, wp)
    total = 0.0
    for j in range(k // 2 + 1):
        total += ((-1) ** k * 2.0 ** (k - 2 * j - 1) * c ** (k - 2 * j)
                  / (math.factorial(j) * math.factorial(k - 2 * j))
                  * rgamma(j - n / 2 + 1 - k).real)
    return complex(math.pi ** (-n / 2) * total)


def harmonic_dim(d: int, k: int) -> int:
    """Dimension of degree-k spherical harmonics on S^{d-1}."""
    if d < 2:
        raise ValueError("need d >= 2")
    if k < 0:
        return 0
    low = math.comb(k + d - 3, d - 1) if k >= 2 else 0
    return math.comb(k + d - 1, d - 1) - low


def _radial_laplacian_power(n: int, s: complex, ell: int):
    """Terms {(a, b): c} with Δ^ℓ A^{-s} = Σ c ρ^a A^{-s-b}, A = x'² + ρ.

    Δ is the nonnegative Laplacian -Σ∂² on R^n; on radial functions of
    ρ = |y|² it acts as -(4ρ g'' + 2n g').
    """
    terms = {(0, 0): 1.0 + 0j}

    def deriv(tm):
        out = {}
        for (a, b), c in tm.items():
            if a:
                out[(a - 1, b)] = out.get((a - 1, b), 0) + c * a
            out[(a, b + 1)] = out.get((a, b + 1), 0) - c * (s + b)
        return out

    for _ in range(ell):
        d1 = deriv(terms)
        d2 = deriv(d1)
        new = {}
        for (a, b), c in d2.items():
            new[(a + 1, b)] = new.get((a + 1, b), 0) - 4 * c
        for (a, b), c in d1.items():
            new[(a, b)] = new.get((a, b), 0) - 2 * n * c
        terms = {key: c for key, c in new.items() if c != 0}
    return terms


def mell_kernel(n: int, s, ell: int, y, wp, pole_tol: float = DEFAULT_POLE_TOL) -> complex:
    """Boundary-expansion kernel M_ℓ(s; y, w').

    x^{-s} R0(s; (x, y), w') = Σ_ℓ x^{2ℓ} M_ℓ(s; y, w') as x -> 0, with
    M_ℓ = π^{-n/2} 2^{-2ℓ-1} Γ(s) / (ℓ! Γ(s-n/2+ℓ+1)) Δ_y^ℓ (x'²+|y-y'|²)^{-s} x'^s.
    """
    wp = _pt(wp)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if len(y) != n or wp.n != n:
        raise DimensionMismatch("boundary point and w' must have n horizontal coordinates")
    s = complex(s)
    den_arg = s - n / 2 + ell + 1
    if _near_nonpositive_int(s, pole_tol) and not _near_nonpositive_int(den_arg, pole_tol):
        raise PoleError(f"M_ell prefactor has a pole at s={s}")
    if _near_nonpositive_int(s, pole_tol):
        s_eval = complex(round(s.real), 0.0)
        ratio = gamma_ratio(s_eval, complex(round(den_arg.real)))
    else:
        ratio = gamma_ratio(s, den_arg)
    rho = float(np.sum((y - np.asarray(wp.y)) ** 2))
    A = wp.x ** 2 + rho
    total = 0j
    for (a, b), c in _radial_laplacian_power(n, s, ell).items():
        total += c * rho ** a * cmath.exp(-(s + b) * math.log(A))
    pref = math.pi ** (-n / 2) * 2.0 ** (-2 * ell - 1) / math.factorial(ell) * ratio
    return pref * total * cmath.exp(s * math.log(wp.x))
