"""Quadrature rules used by the special functions and kernels."""
import math

import numpy as np

from .errors import ConvergenceError

EPS = np.finfo(float).eps


def _edge_ok(logf, u, tol_log):
    v = np.pi * np.sinh(u)
    log_t = -np.logaddexp(0.0, -v)
    log_1mt = -np.logaddexp(0.0, v)
    vals = logf(log_t, log_1mt) + log_t + log_1mt + np.log(np.pi * np.cosh(u))
    return np.all(vals.real < tol_log)


def tanh_sinh_01(logf, tol=1e-14, max_level=9):
    """Integrate exp(logf) over [0, 1] with a double-exponential rule.

    ``logf(log_t, log_1mt)`` receives log t and log(1 - t) as arrays and
    returns the (complex) log of the integrand.  Working with logarithms
    keeps endpoint singularities like t**(b-1) finite far into the tails.
    Returns ``(value, est_abs_err)``.
    """
    # probe the integrand scale near the middle
    mid = logf(np.array([math.log(0.5)]), np.array([math.log(0.5)]))[0]
    scale_log = mid.real
    tol_log = scale_log + math.log(tol) - 6.0
    U = 2.0
    while U < 9.0 and not _edge_ok(logf, np.array([-U, U]), tol_log):
        U += 0.5

    def nodes(h, odd_only):
        kmax = int(U / h)
        k = np.arange(-kmax, kmax + 1)
        if odd_only:
            k = k[k % 2 != 0]
        return k * h

    def contribution(u):
        v = np.pi * np.sinh(u)
        log_t = -np.logaddexp(0.0, -v)
        log_1mt = -np.logaddexp(0.0, v)
        w = logf(log_t, log_1mt) + log_t + log_1mt + np.log(np.pi * np.cosh(u))
        terms = np.exp(w)
        return terms.sum(), np.abs(terms).sum()

    h = 0.5
    s, a = contribution(nodes(h, False))
    est = h * s
    abs_sum = h * a
    prev_diff = None
    for _ in range(max_level):
        s_new, a_new = contribution(nodes(h / 2, True))
        s = s + s_new
        a = a + a_new
        h /= 2
        new = h * s
        abs_sum = h * a
        diff = abs(new - est)
        est = new
        floor = 50 * EPS * abs_sum
        if diff <= max(tol * abs(est), floor):
            return est, max(diff * diff / max(abs(est), 1e-300), floor, EPS * abs(est))
        if prev_diff is not None and diff < 1e-6 * abs(est) and diff * diff / max(prev_diff, 1e-300) <= tol * abs(est):
            # quadratic convergence: the next level would only square the error
            return est, max(diff * diff / max(prev_diff, 1e-300), floor)
        prev_diff = diff
    raise ConvergenceError(f"tanh-sinh did not converge (last diff {diff:.3e})")


def circle_nodes(center, radius, nodes):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    return center + radius * np.exp(1j * theta)


def circle_trapezoid(f, center, radius, nodes=64):
    """(1/2πi)∮ f(s) ds over the circle, by the periodic trapezoid rule."""
    z = circle_nodes(center, radius, nodes)
    vals = np.array([f(zz) for zz in z], dtype=complex)
    # ds = i (z - c) dθ, so (1/2πi) ∮ f ds = mean(f (z - c))
    return np.mean(vals * (z - center))
