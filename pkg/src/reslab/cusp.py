"""Model cusps: parabolic groups, holonomy angles, Fourier-Bessel modes and mode kernels.

Angles are carried in turns (angle / 2π) in [0, 1): exact ``Fraction`` for
rational specifications, ``mpmath.mpf`` at the stated bit count otherwise.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import mpmath
import numpy as np
from scipy import integrate

from .errors import (AngleParse, ConvergenceError, ExplosionGuard, GridTooCoarse, OffDomain,
                     PlaneOverflow, RankDeficient)
from .hyperbolic import KernelValue, harmonic_dim
from .specfn import bessel_i, bessel_j, bessel_k

TWO_PI = 2 * math.pi
DEFAULT_MODE_CAP = 2_000_000


# ---------------------------------------------------------------- angles

@dataclass(frozen=True)
class AngleSpec:
    """Rotation angle, stored in turns.

    ``rational(p, q)`` is the angle 2π p/q; ``decimal(text, bits)`` parses
    ``text`` as a number of turns at ``bits`` of precision.
    """

    kind: str
    p: int = 0
    q: int = 1
    text: str = ""
    bits: int = 64
    _turns: object = field(default=None, compare=False, repr=False)

    @classmethod
    def rational(cls, p: int, q: int) -> "AngleSpec":
        if q <= 0:
            raise AngleParse("denominator must be positive")
        fr = Fraction(p, q) % 1
        return cls("rational", fr.numerator, fr.denominator)

    @classmethod
    def decimal(cls, text: str, bits: int = 64) -> "AngleSpec":
        if bits < 53:
            raise AngleParse("decimal angles need at least 53 bits")
        try:
            with mpmath.workprec(bits):
                val = mpmath.mpf(text)
        except (ValueError, TypeError) as exc:
            raise AngleParse(f"cannot parse angle {text!r}") from exc
        if not mpmath.isfinite(val):
            raise AngleParse(f"angle {text!r} is not finite")
        with mpmath.workprec(bits):
            val = val - mpmath.floor(val)
        return cls("decimal", text=str(text), bits=int(bits), _turns=val)

    @classmethod
    def from_mpf(cls, turns, bits: int, label: str | None = None) -> "AngleSpec":
        """Wrap a high-precision value; ``label`` replaces the (long) decimal text."""
        with mpmath.workprec(bits):
            val = mpmath.mpf(turns)
            val = val - mpmath.floor(val)
            text = label if label is not None else mpmath.nstr(val, int(bits * 0.30103) + 2, strip_zeros=False)
        return cls("decimal", text=text, bits=int(bits), _turns=val)

    @classmethod
    def parse(cls, text: str, bits: int | None = None) -> "AngleSpec":
        """'p/q' strings are rational; anything else is decimal."""
        text = str(text).strip()
        if "/" in text and bits is None:
            try:
                num, den = text.split("/")
                return cls.rational(int(num), int(den))
            except ValueError as exc:
                raise AngleParse(f"bad rational angle {text!r}") from exc
        try:
            return cls.rational(int(text), 1) if bits is None and text.lstrip("-").isdigit() \
                else cls.decimal(text, bits or 64)
        except ValueError as exc:
            raise AngleParse(f"bad angle {text!r}") from exc

    @property
    def turns(self):
        if self.kind == "rational":
            return Fraction(self.p, self.q)
        return self._turns

    @property
    def radians(self) -> float:
        return TWO_PI * float(self.turns)

    def __hash__(self):
        return hash((self.kind, self.p, self.q, self.text, self.bits))


@dataclass(frozen=True)
class Generator:
    rotation_angles: tuple
    translation: tuple

    def __post_init__(self):
        object.__setattr__(self, "rotation_angles", tuple(self.rotation_angles))
        object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))


@dataclass(frozen=True)
class CuspGroup:
    """Abelian parabolic group: commuting screw motions (rotation, translation)."""

    n: int
    generators: tuple
    _gram: object = field(default=None, compare=False, repr=False)
    _dual: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def planes(self) -> int:
        return len(self.generators[0].rotation_angles) if self.generators else 0

    @property
    def fiber_dim(self) -> int:
        return self.n - self.rank

    @property
    def exact(self) -> bool:
        return all(a.kind == "rational" for gen in self.generators for a in gen.rotation_angles)

    @property
    def bits(self) -> int:
        return max([a.bits for gen in self.generators for a in gen.rotation_angles if a.kind == "decimal"],
                   default=53)

    @property
    def validated(self) -> bool:
        return self._gram is not None

    def translations(self) -> np.ndarray:
        return np.array([gen.translation for gen in self.generators], dtype=float)


def make_group(n: int, angles, translations) -> CuspGroup:
    """Convenience constructor: ``angles[j][r]`` are AngleSpecs or 'p/q' strings."""
    gens = []
    for ang, tr in zip(angles, translations):
        specs = tuple(a if isinstance(a, AngleSpec) else AngleSpec.parse(a) for a in ang)
        gens.append(Generator(specs, tuple(np.atleast_1d(tr))))
    return validate_group(CuspGroup(n, tuple(gens)))


def validate_group(g: CuspGroup) -> CuspGroup:
    """Check the group invariants and attach the translation Gram matrix and dual basis."""
    k0 = g.rank
    if k0 < 1 or k0 > g.n - 1:
        raise RankDeficient(f"rank {k0} must lie in [1, n-1] for n={g.n}")
    t = g.planes
    for gen in g.generators:
        if len(gen.rotation_angles) != t:
            raise PlaneOverflow("all generators must rotate the same planes")
        if len(gen.translation) != k0:
            raise RankDeficient("translations must have length equal to the rank")
        for a in gen.rotation_angles:
            if not isinstance(a, AngleSpec):
                raise AngleParse(f"not an AngleSpec: {a!r}")
    if 2 * t > g.n - k0:
        raise PlaneOverflow(f"{t} rotation planes do not fit in a fiber of dimension {g.n - k0}")
    V = g.translations()
    gram = V @ V.T
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise RankDeficient("translations are linearly dependent")
    dual = np.linalg.inv(V).T
    object.__setattr__(g, "_gram", gram)
    object.__setattr__(g, "_dual", dual)
    return g


def _require(g):
    return g if g.validated else validate_group(g)


def dual_basis(g: CuspGroup) -> np.ndarray:
    """Rows v*_j with <v_i, v*_j> = δ_ij."""
    return _require(g)._dual.copy()


def gram_matrix(g: CuspGroup) -> np.ndarray:
    return _require(g)._gram.copy()


# ---------------------------------------------------------------- harmonic weights

class HarmonicWeight(NamedTuple):
    weight: tuple
    multiplicity: int


@lru_cache(maxsize=4096)
def _sym_weights(d: int, t: int, m: int):
    """Weight multiplicities of the torus on degree-m polynomials in d variables."""
    if m < 0:
        return {}
    if t == 0:
        return {(): math.comb(m + d - 1, d - 1)} if d > 0 else ({(): 1} if m == 0 else {})
    out = {}
    for k in range(m + 1):
        rest = _sym_weights(d - 2, t - 1, m - k)
        if not rest:
            continue
        # one rotation plane in degree k: z^a zbar^(k-a) has weight 2a - k
        for w in range(-k, k + 1, 2):
            for key, c in rest.items():
                kk = (w,) + key
                out[kk] = out.get(kk, 0) + c
    return out


def harmonic_weights(d: int, t: int, m: int) -> list:
    """Torus weights on degree-m spherical harmonics in d variables (t rotation planes)."""
    if 2 * t > d:
        raise PlaneOverflow("2t must not exceed d")
    if m < 0:
        return []
    if d == 2 and t == 1:
        out = {(m,): 1, (-m,): 1} if m else {(0,): 1}
    elif d == 2 and t == 0:
        out = {(): harmonic_dim(2, m)}
    else:
        top = _sym_weights(d, t, m)
        low = _sym_weights(d, t, m - 2)
        out = {w: c - low.get(w, 0) for w, c in top.items()}
    return [HarmonicWeight(w, c) for w, c in sorted(out.items()) if c > 0]


# ---------------------------------------------------------------- holonomy

class HolonomyClass(NamedTuple):
    turns: tuple           # angle vector over 2π, each in [0, 1)
    multiplicity: int
    weights: tuple         # the harmonic weights merged into this class

    @property
    def angles(self) -> tuple:
        return tuple(TWO_PI * float(c) for c in self.turns)


def _frac1(v):
    if isinstance(v, Fraction):
        return v - math.floor(v)
    return v - mpmath.floor(v)


def _weight_turns(g, w, bits):
    vec = []
    for gen in g.generators:
        acc = Fraction(0) if g.exact else mpmath.mpf(0)
        for c, a in zip(w, gen.rotation_angles):
            acc = acc + c * a.turns
        vec.append(acc)
    return tuple(vec)


def _holonomy(g, m):
    bits = g.bits
    classes = {}
    with mpmath.workprec(bits + 16):
        for hw in harmonic_weights(g.fiber_dim, g.planes, m):
            key = tuple(_frac1(v) for v in _weight_turns(g, hw.weight, bits))
            if not g.exact:
                key = tuple(+v for v in key)
            mult, ws = classes.get(key, (0, ()))
            classes[key] = (mult + hw.multiplicity, ws + (hw.weight,))
    return [HolonomyClass(k, mult, ws) for k, (mult, ws) in sorted(classes.items(), key=lambda kv: kv[0])]


@lru_cache(maxsize=8192)
def _holonomy_cached(g, m):
    return tuple(_holonomy(g, m))


def holonomy_angles(g: CuspGroup, m: int) -> list:
    """Distinct holonomy angle vectors at degree m with multiplicities, sorted."""
    return list(_holonomy_cached(_require(g), m))


# ---------------------------------------------------------------- modes

@dataclass(frozen=True)
class Mode:
    m: int
    p: int
    vstar: tuple
    turns: tuple
    b: float
    multiplicity: int = 1
    is_zero: bool = False

    @property
    def angles(self) -> tuple:
        return tuple(TWO_PI * float(c) for c in self.turns)


def _zero_threshold(g):
    return mpmath.mpf(10) ** (-(g.bits // 4))


def _b_from_shift(g, shift):
    """2π |V*^T shift| for a shift vector c + n (exact or mpf entries)."""
    if g.exact:
        if all(v == 0 for v in shift):
            return 0.0, True
    else:
        thr = _zero_threshold(g)
        if all(abs(v) < thr for v in shift):
            return 0.0, True
    vec = g._dual.T @ np.array([float(v) for v in shift])
    return TWO_PI * float(np.linalg.norm(vec)), False


def b_value(g: CuspGroup, m: int, p: int, vstar) -> float:
    """b = |Σ_j α_j v*_j + 2π v*| with v* = Σ_j vstar_j v*_j in the dual lattice."""
    g = _require(g)
    classes = holonomy_angles(g, m)
    if not 0 <= p < len(classes):
        raise OffDomain(f"p={p} out of range for degree {m} ({len(classes)} classes)")
    c = classes[p].turns
    with mpmath.workprec(g.bits + 16):
        shift = tuple(ci + int(ni) for ci, ni in zip(c, vstar))
        return _b_from_shift(g, shift)[0]


def rank1_b(g: CuspGroup, m_signed: int, j: int):
    """Rank-one b = (2π/ℓ)|mθ/2π + j| with unreduced angle and signed m.

    Returns an exact 0 when the rational combination vanishes.
    """
    g = _require(g)
    if g.rank != 1 or g.planes != 1:
        raise OffDomain("rank1_b needs a rank-one group with one rotation plane")
    ell = abs(g.generators[0].translation[0])
    a = g.generators[0].rotation_angles[0]
    with mpmath.workprec(g.bits + 16):
        val = m_signed * a.turns + j
        if (a.kind == "rational" and val == 0) or (a.kind == "decimal" and abs(val) < _zero_threshold(g)):
            return 0.0
        return TWO_PI / ell * abs(float(val))


def _mode(g, m, p, cls, n):
    with mpmath.workprec(g.bits + 16):
        shift = tuple(ci + ni for ci, ni in zip(cls.turns, n))
        b, zero = _b_from_shift(g, shift)
    return Mode(m, p, tuple(int(v) for v in n), cls.turns, b, cls.multiplicity, zero)


def _box_radius(g, b_max):
    lam_min = float(np.linalg.eigvalsh(g._dual @ g._dual.T)[0])
    return b_max / (TWO_PI * math.sqrt(lam_min))


def enumerate_modes(g: CuspGroup, m_max: int, b_max: float, cap: int = DEFAULT_MODE_CAP) -> list:
    """All modes with m <= m_max and b <= b_max, sorted by (m, p, v*)."""
    g = _require(g)
    R = _box_radius(g, b_max)
    classes = [holonomy_angles(g, m) for m in range(m_max + 1)]
    predicted = sum(len(c) for c in classes) * (2 * R + 2) ** g.rank
    if predicted > cap:
        raise ExplosionGuard(f"about {predicted:.3g} candidate modes exceed the cap {cap}")
    out = []
    for m, cls_list in enumerate(classes):
        for p, cls in enumerate(cls_list):
            c = [float(v) for v in cls.turns]
            ranges = [range(math.ceil(-ci - R - 1e-9), math.floor(-ci + R + 1e-9) + 1) for ci in c]
            for n in itertools.product(*ranges):
                mode = _mode(g, m, p, cls, n)
                if mode.b <= b_max * (1 + 1e-12):
                    out.append(mode)
    out.sort(key=lambda md: (md.m, md.p, md.vstar))
    return out


def _closest_nonzero(g, cls):
    """Minimal positive b over the translates c + n for one holonomy class."""
    c = cls.turns
    k0 = g.rank
    if k0 == 1:
        cf = c[0]
        v = abs(g._dual[0, 0])
        zero = (cf == 0) if g.exact else abs(cf) < _zero_threshold(g)
        if zero:
            return TWO_PI * v, (1,)
        # the nearest integer translates are n = 0 and n = -1
        lo, hi = cf, 1 - cf
        return (TWO_PI * v * float(lo), (0,)) if lo <= hi else (TWO_PI * v * float(hi), (-1,))
    cf = np.array([float(v) for v in c])
    base = -np.round(cf).astype(int)
    best = (math.inf, None)
    for off in itertools.product((-1, 0, 1), repeat=k0):
        n = tuple(int(b + o) for b, o in zip(base, off))
        b, zero = _b_from_shift(g, tuple(ci + ni for ci, ni in zip(c, n)))
        if not zero and b < best[0]:
            best = (b, n)
    R = _box_radius(g, best[0])
    ranges = [range(math.ceil(-ci - R - 1e-9), math.floor(-ci + R + 1e-9) + 1) for ci in cf]
    for n in itertools.product(*ranges):
        b, zero = _b_from_shift(g, tuple(ci + ni for ci, ni in zip(c, n)))
        if not zero and (b < best[0] or (b == best[0] and n < best[1])):
            best = (b, n)
    return best


@lru_cache(maxsize=200000)
def _min_positive_b_cached(g, m):
    best = None
    with mpmath.workprec(g.bits + 16):
        for p, cls in enumerate(holonomy_angles(g, m)):
            b, n = _closest_nonzero(g, cls)
            if best is None or b < best[0]:
                best = (b, p, cls, n)
        b, p, cls, n = best
        mode = _mode(g, m, p, cls, n)
    return mode.b, mode


def min_positive_b(g: CuspGroup, m: int):
    """(β(m), witness mode): the smallest nonzero b at degree m."""
    return _min_positive_b_cached(_require(g), m)


# ---------------------------------------------------------------- radial operators

def delta_i_apply(d: int, m: int, b: float, f, r) -> np.ndarray:
    """Apply Δ_I = -∂r² - ((d-1)/r)∂r + m(m+d-2)/r² + b² to samples f on a uniform grid r."""
    f = np.asarray(f)
    r = np.asarray(r, dtype=float)
    if len(f) < 5 or len(r) != len(f):
        raise GridTooCoarse("need at least 5 grid points")
    if np.any(r <= 0):
        raise GridTooCoarse("radial grid must be positive")
    h = r[1] - r[0]
    if not np.allclose(np.diff(r), h, rtol=1e-9, atol=0):
        raise GridTooCoarse("grid must be uniform")
    d1 = np.empty_like(f)
    d2 = np.empty_like(f)
    # fourth-order central stencils inside, second order near and at the ends
    d1[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d2[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)
    for i in (1, len(f) - 2):
        d1[i] = (f[i + 1] - f[i - 1]) / (2 * h)
        d2[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h)
    d1[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    d1[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    d2[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h)
    d2[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / (h * h)
    return -d2 - (d - 1) / r * d1 + (m * (m + d - 2) / r ** 2 + b * b) * f


def f_kernel(s, n: int, x: float, xp: float, tau_arg: float, ctx=None, bessel=None) -> complex:
    """F(τ) = K_λ(x_> τ) I_λ(x_< τ) with λ = s - n/2."""
    if not (x > 0 and xp > 0 and tau_arg > 0):
        raise OffDomain("f_kernel needs positive arguments")
    lam = complex(s) - n / 2
    big, small = (x, xp) if x >= xp else (xp, x)
    kf, if_ = (bessel or (bessel_k, bessel_i))
    return kf(lam, big * tau_arg, ctx) * if_(lam, small * tau_arg, ctx)


DENSITY_CONVENTIONS = {"hankel": 1.0, "paper": 2 / math.pi}


def spectral_density(d: int, m: int, t: float, r: float, rp: float, convention: str = "hankel") -> float:
    """Spectral density of Δ_I - b² at frequency t: c (rr')^{-(d-2)/2} J_ν(rt) J_ν(r't) t.

    ν = (d-2)/2 + m.  The default constant c = 1 is the Hankel-transform
    normalization for the measure r^{d-1} dr; ``convention="paper"`` uses 2/π.
    """
    if not (t > 0 and r > 0 and rp > 0):
        raise OffDomain("spectral_density needs positive arguments")
    nu = (d - 2) / 2 + m
    c = DENSITY_CONVENTIONS[convention]
    r, rp = sorted((r, rp))
    return c * (r * rp) ** (-(d - 2) / 2) * bessel_j(nu, r * t) * bessel_j(nu, rp * t) * t


@dataclass(frozen=True)
class QuadSpec:
    rtol: float = 1e-10
    atol: float = 1e-14
    limit: int = 2000


def mode_resolvent_kernel(g: CuspGroup, mode: Mode, s, x: float, r: float, xp: float, rp: float,
                          quad: QuadSpec | None = None, convention: str = "hankel") -> KernelValue:
    """∫_0^∞ F(√(t² + b²)) dΠ(t; r, r') for one cusp mode.

    The integrand decays like exp(-|x - x'| t), which fixes the truncation
    point; x = x' is rejected because the integral is then only conditionally
    convergent.
    """
    g = _require(g)
    quad = quad or QuadSpec()
    s = complex(s)
    if not s.real > g.n / 2:
        raise OffDomain("mode kernels are evaluated for Re s > n/2")
    gap = abs(x - xp)
    if gap < 1e-3 * max(x, xp):
        raise OffDomain("x and x' must differ for the spectral integral to converge")
    d = g.fiber_dim
    b = mode.b
    T = (math.log(1 / quad.atol) + 10) / gap

    def integrand(t):
        if t == 0:
            return np.zeros(2)
        val = f_kernel(s, g.n, x, xp, math.sqrt(t * t + b * b)) * spectral_density(d, mode.m, t, r, rp, convention)
        return np.array([val.real, val.imag])

    # split at oscillation scale so the adaptive rule starts from a fair mesh
    pts = max(8, int(T * (r + rp) / math.pi))
    res, err = integrate.quad_vec(integrand, 0.0, T, epsabs=quad.atol, epsrel=quad.rtol,
                                  limit=quad.limit, points=np.linspace(0, T, pts + 1)[1:-1])
    val = complex(res[0], res[1])
    rel_err = float(err) / max(abs(val), 1e-300)
    if rel_err > max(100 * quad.rtol, 1e-6):
        raise ConvergenceError(f"mode integral error estimate {rel_err:.2e} is too large")
    return KernelValue(val, rel_err, "hankel_quadrature")
