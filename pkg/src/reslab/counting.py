"""Resonance sets of the model spaces, counting bounds, the canonical product and zero counting."""
from __future__ import annotations

import cmath
import math
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .cusp import CuspGroup, _require
from .dioph import lambda_x
from .errors import ContourThroughZero, OffDomain, TruncationTooSmall
from .hyperbolic import harmonic_dim
from .quadrature import circle_nodes
from .specfn import log_weierstrass_factor, log_weierstrass_tail_bound


class ResonancePoint(NamedTuple):
    location: complex
    multiplicity: int
    exactness: str            # "exact" or "upper_bound"
    provenance: str
    flag: str = ""


class CountingCurve(NamedTuple):
    samples: list             # (R, count)

    def is_monotone(self) -> bool:
        counts = [c for _, c in self.samples]
        return all(a <= b for a, b in zip(counts, counts[1:]))


# ---------------------------------------------------------------- model resonances

def hyperbolic_resonances(n: int, R: float):
    """Resonances of H^{n+1} in |s - n/2| <= R with their multiplicities, and N(R).

    For odd n they sit at s = -k with multiplicity harmonic_dim(n+2, k); for
    even n the resolvent has no poles.
    """
    if n < 1:
        raise OffDomain("n must be positive")
    pts = []
    if n % 2 == 1:
        k = 0
        while k + n / 2 <= R:
            pts.append(ResonancePoint(complex(-k), harmonic_dim(n + 2, k), "exact", "model residue rank"))
            k += 1
    return pts, (float(R), sum(p.multiplicity for p in pts))


def counting_curve(n: int, radii) -> CountingCurve:
    return CountingCurve([hyperbolic_resonances(n, R)[1] for R in sorted(radii)])


def cusp_pole_lattice(g: CuspGroup, R: float, c_bound: float) -> list:
    """Candidate cusp poles k0/2 - k inside |s - n/2| <= R, multiplicities as upper bounds.

    The multiplicity ⌈c_bound (1+k)^{n-k0}⌉ bounds the residue rank.  When
    n - k0 is even the zero-b sector has no poles, which is recorded in ``flag``.
    """
    g = _require(g)
    if not c_bound > 0:
        raise OffDomain("c_bound must be positive")
    n, k0 = g.n, g.rank
    flag = "zero-b sector pole-free (n-k0 even)" if (n - k0) % 2 == 0 else ""
    out = []
    k = 0
    # the lattice is a ray heading left; points enter the ball once and stay until they leave
    while True:
        s = k0 / 2 - k
        dist = abs(s - n / 2)
        if dist <= R:
            out.append(ResonancePoint(complex(s), math.ceil(c_bound * (1 + k) ** (n - k0)), "upper_bound",
                                      "cusp lattice rank bound", flag))
        elif s < n / 2:
            break
        k += 1
    return out


# ---------------------------------------------------------------- bounds

def theorem_bound(groups, n: int, R: float, C: float, diophantine_form: bool = False) -> float:
    """C Λ_X(2R)^{n+2} / R, or C R^{n+1} (log R)^{n+2} in the Diophantine form."""
    if not R > 1:
        raise OffDomain("R must exceed 1")
    if diophantine_form:
        return C * R ** (n + 1) * math.log(R) ** (n + 2)
    return C * lambda_x(groups, 2 * R) ** (n + 2) / R


def strip_bound(K: float, T: float, C_K: float, n: int) -> float:
    """C_K T^{n+2} for resonances in the strip Re s > -K, |Im s| <= T."""
    if not T > 1:
        raise OffDomain("T must exceed 1")
    return C_K * T ** (n + 2)


class DiskGeometry(NamedTuple):
    center: float
    radius: float
    count_center: float
    count_radius: float
    contains: bool


def disk_geometry(a: float, N: int, T: float, n: int) -> DiskGeometry:
    """Big disk about s_N = aN of radius s_N + 2T and the counting disk |s - n/2| <= T."""
    c = a * N
    rad = c + 2 * T
    contains = abs(n / 2 - c) + T <= rad
    return DiskGeometry(c, rad, n / 2, T, contains)


# ---------------------------------------------------------------- canonical product

class CanonicalValue(NamedTuple):
    log_value: complex        # log g_L(s) (any branch); -inf real part at a zero
    truncation_log_bound: float

    @property
    def value(self) -> complex:
        if self.log_value.real == -math.inf:
            return 0j
        return cmath.exp(self.log_value)


def roots_of_unity(order: int) -> np.ndarray:
    # cospi/sinpi keep ±1 and ±i exact, so zeros on the axes are hit exactly
    t = [mpmath.mpf(2 * j) / order for j in range(order)]
    return np.array([complex(float(mpmath.cospi(x)), float(mpmath.sinpi(x))) for x in t])


def _truncation_bound(s_abs, L, n, k_max):
    # Σ_{k>K} 2L k^n · 2p · 2|2s/k|^{p+1}/(p+1) with p = n+1, using Σ_{k>K} k^{-2} <= 1/K
    p = n + 1
    return 2 * L * 2 * p * log_weierstrass_tail_bound(2 * s_abs, p) / k_max


def canonical_product(s, L: int, n: int, k_max: int, method: str = "factors") -> CanonicalValue:
    """g_L(s) = s^L Π_{k≤k_max} Π_{ω^{2(n+1)}=1} E(-2ωs/k, n+1)^{2Lk^n}, in log space.

    ``method="factors"`` sums the logs of the individual Weierstrass factors;
    ``method="closed"`` uses Π_ω E(-ωz, p) = 1 - z^{2p} for each k.
    """
    s = complex(s)
    if k_max < 4 * abs(s):
        raise TruncationTooSmall(f"k_max={k_max} must be at least 4|s|={4 * abs(s):.3g}")
    p = n + 1
    k = np.arange(1, k_max + 1, dtype=float)
    expo = 2 * L * k ** n
    with np.errstate(divide="ignore", invalid="ignore"):
        if method == "factors":
            w = roots_of_unity(2 * p)
            z = -2 * s * w[None, :] / k[:, None]
            logs = log_weierstrass_factor(z, p).sum(axis=1)
        elif method == "closed":
            logs = np.log(1 - (2 * s / k) ** (2 * p))
        else:
            raise ValueError(f"unknown method {method!r}")
        total = complex(np.sum(expo * logs))
        if s == 0:
            total = complex(-math.inf, 0)
        else:
            total += L * cmath.log(s)
    if math.isnan(total.real):
        total = complex(-math.inf, 0)
    return CanonicalValue(total, _truncation_bound(abs(s), L, n, k_max))


def canonical_zero_multiplicity(s0, L: int, n: int, k_max: int, tol: float = 1e-12) -> int:
    """Order of g_L at s0 by enumerating the (ω, k) with -2ωs0/k = 1."""
    s0 = complex(s0)
    if abs(s0) < tol:
        return L
    order = 0
    for k in range(1, k_max + 1):
        for w in roots_of_unity(2 * (n + 1)):
            if abs(-2 * w * s0 / k - 1) < tol:
                order += 2 * L * k ** n
    return order


# ---------------------------------------------------------------- zero counting

class ZeroCount(NamedTuple):
    count: int
    rounding_distance: float


def _contour_logs(f, z, log):
    if log:
        vals = np.array([complex(f(zz)) for zz in z])
    else:
        with np.errstate(divide="ignore"):
            vals = np.log(np.array([complex(f(zz)) for zz in z]))
    return vals


def zero_count_disk(f: Callable, center, radius: float, nodes: int = 256, log: bool = False) -> ZeroCount:
    """Zeros of f inside the circle, by the trapezoid rule for (1/2πi)∮ f'/f.

    f'/f at each node comes from a central difference of log f along the
    circle with the phase jump wrapped into (-π, π].  With ``log=True`` the
    callable already returns log f, which avoids overflow.
    """
    center = complex(center)
    z = circle_nodes(center, radius, nodes)
    lf = _contour_logs(f, z, log)
    re = lf.real
    if not np.all(np.isfinite(re)) or re.min() - re.max() < math.log(1e-12):
        raise ContourThroughZero("f (nearly) vanishes on the contour")
    d = np.roll(lf, -1) - np.roll(lf, 1)
    d = d.real + 1j * ((d.imag + np.pi) % (2 * np.pi) - np.pi)
    dz = np.roll(z, -1) - np.roll(z, 1)
    val = np.mean(d / dz * (z - center))
    # central differencing on the circle inflates the result by h/sin(h), h = 2π/nodes
    h = 2 * np.pi / nodes
    val *= math.sin(h) / h
    count = int(round(val.real))
    return ZeroCount(count, float(abs(val - count)))


def jensen_count_bound(f: Callable, s0, r_inner: float, r_outer: float, log_lower_at_s0: float,
                       nodes: int = 512, log: bool = False) -> float:
    """(max_{|s-s0|=r_outer} log|f| - log_lower_at_s0) / log(r_outer/r_inner)."""
    if not 0 < r_inner < r_outer:
        raise OffDomain("need 0 < r_inner < r_outer")
    z = circle_nodes(complex(s0), r_outer, nodes)
    top = float(np.max(_contour_logs(f, z, log).real))
    return max(0.0, (top - log_lower_at_s0) / math.log(r_outer / r_inner))


class GrowthSup(NamedTuple):
    sup: float
    argmax: complex
    k_max: int


def canonical_growth_sup(n: int, L: int, k_max: int, radius: float = 30.0, step: float = 0.5,
                         method: str = "closed") -> GrowthSup:
    """sup of log|g_L(s)| / ⟨s⟩^{n+1} over a square grid in |s| <= radius.

    The grid is offset by a quarter step so it never lands on the zeros
    s = -k/(2ω).
    """
    axis = np.arange(-radius, radius + step / 2, step) + step / 4
    best, arg = -math.inf, 0j
    for a in axis:
        for b in axis:
            s = complex(a, b)
            if abs(s) > radius:
                continue
            v = canonical_product(s, L, n, k_max, method=method).log_value.real / (1 + abs(s) ** 2) ** ((n + 1) / 2)
            if v > best:
                best, arg = v, s
    return GrowthSup(best, arg, k_max)
