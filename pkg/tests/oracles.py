"""Independent reference computations used by the tests (not library code)."""
import itertools
import math

import numpy as np

PRIME = 2 ** 31 - 1


def _rank_mod_p(M):
    M = np.array(M, dtype=np.int64) % PRIME
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = np.nonzero(M[rank:, c])[0]
        if len(piv) == 0:
            continue
        p = rank + piv[0]
        M[[rank, p]] = M[[p, rank]]
        inv = pow(int(M[rank, c]), PRIME - 2, PRIME)
        M[rank] = (M[rank] * inv) % PRIME
        others = np.nonzero(M[:, c])[0]
        others = others[others != rank]
        for r in others:
            M[r] = (M[r] - M[r, c] * M[rank]) % PRIME
        rank += 1
    return rank


def _rank_exact(M):
    from fractions import Fraction
    A = [[Fraction(v) for v in row] for row in M]
    rank = 0
    rows = len(A)
    cols = len(A[0]) if rows else 0
    for c in range(cols):
        p = next((r for r in range(rank, rows) if A[r][c] != 0), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        for r in range(rows):
            if r != rank and A[r][c] != 0:
                f = A[r][c] / A[rank][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


def monomials(d, k):
    if k < 0:
        return []
    out = []
    for combo in itertools.combinations_with_replacement(range(d), k):
        e = [0] * d
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def harmonic_dim_bruteforce(d, k):
    """dim ker(Laplacian: P_k -> P_{k-2}) from the monomial matrix.

    The Laplacian preserves the parity pattern of exponents, so the matrix is
    block diagonal over parity classes; each block rank is computed mod a large
    prime and confirmed exactly when it is not full row rank.
    """
    cols = monomials(d, k)
    if k < 2:
        return len(cols)
    rows = monomials(d, k - 2)
    row_index = {m: i for i, m in enumerate(rows)}
    blocks = {}
    for m in cols:
        blocks.setdefault(tuple(e % 2 for e in m), []).append(m)
    rank = 0
    for par, bcols in blocks.items():
        brows = [r for r in rows if tuple(e % 2 for e in r) == par]
        if not brows:
            continue
        local = {r: i for i, r in enumerate(brows)}
        M = np.zeros((len(brows), len(bcols)), dtype=np.int64)
        for j, m in enumerate(bcols):
            for i in range(d):
                if m[i] >= 2:
                    t = list(m)
                    t[i] -= 2
                    M[local[tuple(t)], j] += m[i] * (m[i] - 1)
        r = _rank_mod_p(M)
        if r < len(brows):
            # mod-p rank is a lower bound only; settle it exactly
            r = _rank_exact(M.tolist())
        rank += r
    assert row_index  # rows exist for k >= 2
    return len(cols) - rank


def h3_green(s, d):
    """Resolvent kernel on H^3 at distance d."""
    return np.exp(-(s - 1) * d) / (4 * np.pi * np.sinh(d))


def i0_sector_oracle(n, k0, s, x, r, xp, rp):
    """m=0, b=0 mode kernel from the H^{d+1} resolvent averaged over the fiber sphere, d = n - k0."""
    from scipy import integrate

    from reslab.hyperbolic import resolvent_kernel

    d = n - k0
    z = s - k0 / 2
    if d == 2:
        def f(ph):
            return resolvent_kernel(2, z, (x, r, 0.0), (xp, rp * math.cos(ph), rp * math.sin(ph))).value.real
        v = integrate.quad(f, 0, 2 * math.pi, epsabs=1e-14, epsrel=1e-12)[0]
    elif d == 3:
        def f(th):
            w = (x, 0.0, 0.0, r)
            wp = (xp, rp * math.sin(th), 0.0, rp * math.cos(th))
            return resolvent_kernel(3, z, w, wp).value.real * 2 * math.pi * math.sin(th)
        v = integrate.quad(f, 0, math.pi, epsabs=1e-14, epsrel=1e-12)[0]
    else:
        raise ValueError("oracle implemented for fiber dimension 2 and 3")
    return (x * xp) ** (-d / 2) * v
