"""Independent brute-force oracles used only by the tests.

None of these call into the solver's geometry or lifting code: they share
only the input containers.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq


# -- exact linear algebra --------------------------------------------------------
def gauss_solve(A, b):
    """Unique solution of a square rational system, or None if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def lowest_point_bruteforce(points):
    """min c over convex combinations of (c_i, v_i) with sum lambda_i v_i = 0.

    An optimal basic solution uses an affinely independent subset, so it
    suffices to enumerate subsets of size <= r + 1 and solve each exactly.
    Returns None when 0 is not in the hull of the v_i.
    """
    r = len(points[0][1])
    best = None
    for size in range(1, r + 2):
        for sub in itertools.combinations(range(len(points)), size):
            # rows: r coordinate equations and sum = 1; least squares is not
            # exact, so pick square subsystems of the (r+1) x size matrix
            rows = [[points[i][1][j] for i in sub] for j in range(r)] + [[1] * size]
            rhs = [0] * r + [1]
            for keep in itertools.combinations(range(r + 1), size):
                if r in keep or size == r + 1:
                    A = [rows[k] for k in keep]
                    lam = gauss_solve(A, [rhs[k] for k in keep])
                    if lam is None or any(x < 0 for x in lam):
                        continue
                    ok = all(sum(l * row[m] for m, l in enumerate(lam)) == rhs[j]
                             for j, row in enumerate(rows))
                    if not ok:
                        continue
                    val = sum(l * points[i][0] for l, i in zip(lam, sub))
                    if best is None or val < best:
                        best = val
    return best


# -- tropical grid ---------------------------------------------------------------
def trop_min(points, d):
    return min(c + sum(a * b for a, b in zip(v, d)) for c, v in points)


def grid_max_exact(points, lo, hi, n):
    """Exact maximum of min_i (c_i + <v_i, d>) over an n^r rational grid."""
    r = len(points[0][1])
    lo, hi = Fraction(lo), Fraction(hi)
    step = (hi - lo) / (n - 1)
    axis = [lo + k * step for k in range(n)]
    best, arg = None, None
    for d in itertools.product(axis, repeat=r):
        val = trop_min(points, d)
        if best is None or val > best:
            best, arg = val, d
    return best, arg, step


def trop_argmax_1d(points):
    """Exact maximizer of a 1-D tropical polynomial via its breakpoints."""
    cands = set()
    for (c1, v1), (c2, v2) in itertools.combinations(points, 2):
        if v1[0] != v2[0]:
            cands.add(Fraction(c2 - c1) / (v1[0] - v2[0]))
    best = max(cands, key=lambda d: trop_min(points, (d,)))
    return best, trop_min(points, (best,))


# -- undetermined coefficients in one variable --------------------------------
def _conv(a, b, K):
    return np.convolve(a, b)[:K]


def _series_inverse(a, K):
    out = np.zeros(K)
    out[0] = 1.0 / a[0]
    for k in range(1, K):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)) / a[0]
    return out


def _series_pow(a, n, K):
    base = a if n >= 0 else _series_inverse(a, K)
    out = np.zeros(K)
    out[0] = 1.0
    for _ in range(abs(n)):
        out = _conv(out, base, K)
    return out


def undetermined_coefficients(terms, order: int):
    """Positive critical point of a 1-D Laurent polynomial with polynomial coefficients.

    ``terms`` is a list of ``(poly, v)`` with ``poly`` a dict {integer exponent:
    positive coefficient} and ``v`` a nonzero integer.  Plugs
    x = t^d (a_0 + a_1 s + a_2 s^2 + ...), s = t^(1/D), into
    sum_i v_i gamma_i(t) x^{v_i} = 0 and matches powers of s one at a time.

    Returns ``(d, D, coeffs)`` with the coefficients of x at exponents
    d + k/D for k < order * D.
    """
    pts = [(min(p), (v,)) for p, v in terms]
    d, tau = trop_argmax_1d(pts)
    D = d.denominator
    K = order * D
    gammas = []
    for p, v in terms:
        g = np.zeros(K)
        for e, c in p.items():
            k = (e + v * d - tau) * D
            assert k.denominator == 1 and k >= 0
            if k < K:
                g[int(k)] += c
        gammas.append((g, v))
    lead = [(g[0], v) for g, v in gammas if g[0] != 0]

    def f0(logx):
        return sum(v * c * math.exp(v * logx) for c, v in lead)

    a0 = math.exp(brentq(f0, -60.0, 60.0, xtol=1e-15, rtol=1e-15))
    dF0 = sum(v * v * c * a0 ** (v - 1) for c, v in lead)
    y = np.zeros(K)
    y[0] = a0

    def residual(y):
        F = np.zeros(K)
        for g, v in gammas:
            F += v * _conv(g, _series_pow(y, v, K), K)
        return F

    for k in range(1, K):
        y[k] = 0.0
        y[k] = -residual(y)[k] / dF0
    return d, D, y
