"""Diophantine behaviour of cusp holonomy: growth functions, envelope fits, worst-case angles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .cusp import AngleSpec, CuspGroup, Mode, _require, make_group, min_positive_b
from .errors import EmptyInput, OffDomain, PrecisionExhausted

TWO_PI = 2 * math.pi
MAX_WORST_CASE_BITS = 10 ** 8


def bracket(u: float) -> float:
    """Japanese bracket √(1 + u²)."""
    return math.hypot(1.0, u)


def neg_part(x: float) -> float:
    """[x]_- = max(-x, 0)."""
    return max(-x, 0.0)


# ---------------------------------------------------------------- β tables

_BETA_CACHE: dict = {}


def _is_circle_rank1(g):
    return g.rank == 1 and g.planes == 1 and g.fiber_dim == 2


def _beta_circle(g, m_lo, m_hi):
    # weights ±m only: β(m) = (2π/ℓ) dist(m θ/2π, Z), or 2π/ℓ when that distance vanishes
    v = TWO_PI * abs(g._dual[0, 0])
    turns = g.generators[0].rotation_angles[0].turns
    out = np.empty(m_hi - m_lo + 1)
    if isinstance(turns, Fraction):
        p, q = turns.numerator, turns.denominator
        for i, m in enumerate(range(m_lo, m_hi + 1)):
            r = (m * p) % q
            out[i] = v if r == 0 else v * min(r, q - r) / q
        return out
    bits = g.bits
    thr = mpmath.mpf(10) ** (-(bits // 4))
    with mpmath.workprec(bits + 16):
        x = m_lo * turns
        x -= mpmath.floor(x)
        for i in range(len(out)):
            dist = min(x, 1 - x)
            out[i] = v if dist < thr else v * float(dist)
            x += turns
            if x >= 1:
                x -= 1
    return out


def beta_table(g: CuspGroup, m_max: int) -> np.ndarray:
    """β(m) = min_positive_b(g, m) for m = 0..m_max (index = m)."""
    g = _require(g)
    have = _BETA_CACHE.get(g)
    start = 0 if have is None else len(have)
    if start <= m_max:
        if _is_circle_rank1(g):
            new = _beta_circle(g, start, m_max)
        else:
            new = np.array([min_positive_b(g, m)[0] for m in range(start, m_max + 1)])
        have = new if have is None else np.concatenate([have, new])
        _BETA_CACHE[g] = have
    return have[: m_max + 1]


# ---------------------------------------------------------------- growth functions

class GrowthSample(NamedTuple):
    u: float
    value: float
    witness_m: int | None
    witness_mode: Mode | None


@dataclass
class GrowthProfile:
    samples: list


def _brackets(u_abs, beta):
    m = np.arange(1, int(math.floor(u_abs)) + 1)
    # log(1) at m = 1 is taken as 0 exactly
    return m, 2 * (u_abs - m) * np.log(1 / beta) - 2 * m * np.log(m)


def lambda_growth(g: CuspGroup, u: float, beta: Callable | None = None):
    """Λ(u) = 2⟨u⟩log⟨u⟩ + max(0, sup_{1≤m≤|u|} [2(|u|-m) log(1/β(m)) - 2m log m]).

    ``beta`` optionally replaces β(m) by an injected table (callable m -> β).
    Returns (value, witness) with witness = (m, Mode or None) at the smallest
    maximizing m, or None when every bracket is negative or the range is empty.
    """
    u_abs = abs(float(u))
    br = bracket(u_abs)
    base = 2 * br * math.log(br)
    m_top = int(math.floor(u_abs))
    if m_top < 1:
        return base, None
    if beta is None:
        b = beta_table(g, m_top)[1:]
    else:
        b = np.array([float(beta(m)) for m in range(1, m_top + 1)])
    if np.any(b <= 0):
        raise OffDomain("β(m) must be positive")
    m, vals = _brackets(u_abs, b)
    i = int(np.argmax(vals))
    sup = float(vals[i])
    if sup < 0:
        return base, None
    wm = int(m[i])
    mode = min_positive_b(g, wm)[1] if beta is None else None
    return base + sup, (wm, mode)


def bracket_value(u: float, m: int, beta_m: float) -> float:
    """The single bracket 2(|u|-m) log(1/β) - 2m log m."""
    u_abs = abs(u)
    return 2 * (u_abs - m) * math.log(1 / beta_m) - (2 * m * math.log(m) if m > 1 else 0.0)


def growth_profile(g: CuspGroup, us) -> GrowthProfile:
    samples = []
    for u in us:
        val, wit = lambda_growth(g, u)
        samples.append(GrowthSample(float(u), val, wit[0] if wit else None, wit[1] if wit else None))
    return GrowthProfile(samples)


def lambda_x(groups, u: float) -> float:
    """Maximum of the cusp growth functions."""
    groups = list(groups)
    if not groups:
        raise EmptyInput("need at least one cusp")
    return max(lambda_growth(g, u)[0] for g in groups)


# ---------------------------------------------------------------- Diophantine fit

class DiophantineReport(NamedTuple):
    c_fit: float
    gamma_fit: float
    min_ratio: float          # min_m β(m) / (c m^-γ) over the fitted range
    bounded_below: bool
    diophantine: bool
    envelope: list            # (m, β) record lows used in the fit


def check_diophantine(g: CuspGroup, m_max: int, gamma_max: float = 2.0, ratio_floor: float = 0.5,
                      beta: Callable | None = None) -> DiophantineReport:
    """Fit β(m) ≈ c m^{-γ} on the lower envelope over m ∈ [√m_max, m_max].

    The envelope starts at m0 = ⌈√m_max⌉ with the running minimum of β over
    1..m0 and then keeps each new record low.  Restricting to the upper
    range keeps early transients of rational angles out of the fit.
    """
    if m_max < 4:
        raise OffDomain("m_max must be at least 4")
    if beta is None:
        b = beta_table(g, m_max)[1:]
    else:
        b = np.array([float(beta(m)) for m in range(1, m_max + 1)])
    m = np.arange(1, m_max + 1)
    m0 = math.ceil(math.sqrt(m_max))
    run = float(np.min(b[:m0]))
    env = [(m0, run)]
    for mm, bb in zip(m[m0:], b[m0:]):
        if bb < run:
            run = float(bb)
            env.append((int(mm), run))
    if len(env) < 2:
        gamma, logc = 0.0, math.log(env[0][1])
    else:
        x = np.log([e[0] for e in env])
        y = np.log([e[1] for e in env])
        slope, logc = np.polyfit(x, y, 1)
        gamma = float(-slope)
    c = math.exp(logc)
    sel = m >= m0
    ratio = float(np.min(b[sel] / (c * m[sel].astype(float) ** (-gamma))))
    bounded = ratio >= ratio_floor
    return DiophantineReport(c, gamma, ratio, bounded, bounded and gamma <= gamma_max, env)


# ---------------------------------------------------------------- continued fractions

def _cf(alpha, depth, bits):
    exact = isinstance(alpha, (Fraction, int))
    x = Fraction(alpha) if exact else mpmath.mpf(alpha)
    if not exact:
        bits = bits or mpmath.mp.prec
    quotients, conv = [], []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    with mpmath.workprec(bits or 53):
        for _ in range(depth + 1):
            a = math.floor(x) if exact else int(mpmath.floor(x))
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            quotients.append(a)
            conv.append((p, q))
            frac = x - a
            if frac == 0:
                break
            if not exact and 2 * math.log2(max(q, 1)) + 16 > bits:
                raise PrecisionExhausted(f"{bits} bits cannot resolve convergent denominators near {q}")
            x = 1 / frac
    return quotients, conv


def continued_fraction(alpha, depth: int, bits: int | None = None) -> list:
    """Convergents (p_k, q_k) of alpha, up to ``depth`` partial quotients.

    ``alpha`` may be a Fraction (exact, terminates) or an mpf.  Each step
    checks that the remaining precision exceeds 2 log2 q_k.
    """
    return _cf(alpha, depth, bits)[1]


def partial_quotients(alpha, depth: int, bits: int | None = None) -> list:
    return _cf(alpha, depth, bits)[0]


# ---------------------------------------------------------------- worst case

@dataclass(frozen=True)
class WorstCaseSpec:
    q: int = 1
    depth: int = 4
    ell: float = 1.0
    precision_bits: int = 65600

    def __post_init__(self):
        if self.q < 1 or self.depth < 1 or not self.ell > 0:
            raise OffDomain("q, depth and ell must be positive")


class WorstCaseRow(NamedTuple):
    m: int
    j: int
    predicted_b: object
    computed_b: object


def worst_case_sequence(q: int, depth: int, bit_cap: int = MAX_WORST_CASE_BITS) -> list:
    """a_1 = 2, a_{l+1} = 2^{a_l^q} (as exponents would overflow, capped by bit_cap)."""
    a = [2]
    while len(a) < depth:
        e = a[-1] ** q
        if e > bit_cap:
            raise PrecisionExhausted(f"a_{len(a) + 1} = 2^(a_{len(a)}^{q}) is beyond any supported precision")
        a.append(1 << e)
    return a


def worst_case_angle(spec: WorstCaseSpec):
    """θ = 2π Σ 1/a_l and the table (m = a_k, j, predicted b, computed b) for k < depth."""
    a = worst_case_sequence(spec.q, spec.depth)
    need = a[-1] ** spec.q + 64
    if spec.precision_bits < need:
        size = f"{need}" if need.bit_length() < 64 else f"about 2^{need.bit_length() - 1}"
        raise PrecisionExhausted(f"need at least {size} bits, have {spec.precision_bits}")
    with mpmath.workprec(spec.precision_bits):
        # every a_l is a power of two, so each term is exact
        turns = mpmath.fsum(mpmath.ldexp(1, -(al.bit_length() - 1)) for al in a)
        theta = 2 * mpmath.pi * turns
        rows = []
        for k in range(spec.depth - 1):
            ak = a[k]
            j = -sum(ak // a[l] for l in range(k + 1))
            computed = 2 * mpmath.pi / spec.ell * abs(ak * turns + j)
            predicted = 2 * mpmath.pi * ak / spec.ell * mpmath.ldexp(1, -(ak ** spec.q))
            rows.append(WorstCaseRow(ak, j, +predicted, +computed))
    return theta, rows, turns


def worst_case_group(spec: WorstCaseSpec, n: int = 3) -> CuspGroup:
    """Rank-one cusp of H^{n+1} rotating by the worst-case angle."""
    _, _, turns = worst_case_angle(spec)
    label = f"worst-case q={spec.q} depth={spec.depth}"
    angle = AngleSpec.from_mpf(turns, spec.precision_bits, label=label)
    return make_group(n, [[angle]], [[spec.ell]])


def loglog_slope(us, values) -> float:
    """Least-squares slope of log value against log u."""
    return float(np.polyfit(np.log(np.asarray(us, float)), np.log(np.asarray(values, float)), 1)[0])
