"""Dense floating-point kernels used by the lifting engine and the grid oracle.

Each kernel has a numba implementation and a pure-numpy implementation with
identical semantics.  The numba path is used when numba imports cleanly and
the environment variable ``TROPCRIT_DISABLE_NUMBA`` is unset or ``0``.
Both implementations stay importable (``*_numba`` / ``*_numpy``) so that
tests and the benchmark can compare them directly.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TROPCRIT_DISABLE_NUMBA", "0") in ("", "0")


# ---------------------------------------------------------------------------
# numpy reference implementations


def conv_rows_numpy(A, B):
    """Row-wise truncated Cauchy product: C[i, k] = sum_j A[i, j] B[i, k - j]."""
    n, L = A.shape
    C = np.empty((n, L))
    for i in range(n):
        C[i] = np.convolve(A[i], B[i])[:L]
    return C


def exp_rows_numpy(A):
    """Row-wise exponential of dense power series (index k = k-th lattice step).

    Uses f_0 = exp(a_0), k f_k = sum_{j=1..k} j a_j f_{k-j}.
    """
    n, L = A.shape
    F = np.zeros((n, L))
    F[:, 0] = np.exp(A[:, 0])
    ja = A * np.arange(L)[None, :]
    for k in range(1, L):
        F[:, k] = np.einsum("ij,ij->i", ja[:, 1 : k + 1], F[:, k - 1 :: -1][:, :k]) / k
    return F


def logsumexp_parts_numpy(ell, Vq, y):
    """Value, gradient and Hessian of y -> log sum_i exp(ell_i + <Vq_i, y>)."""
    z = ell + Vq @ y
    zmax = z.max()
    e = np.exp(z - zmax)
    s = e.sum()
    p = e / s
    g = Vq.T @ p
    H = (Vq * p[:, None]).T @ Vq - np.outer(g, g)
    return zmax + np.log(s), g, H


def trop_grid_numpy(C, V, P):
    """min_i (C_i + <V_i, P_k>) for every grid point P_k."""
    return (P @ V.T + C[None, :]).min(axis=1)


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def conv_rows_numba(A, B):
        n, L = A.shape
        C = np.zeros((n, L))
        for i in range(n):
            for j in range(L):
                a = A[i, j]
                if a == 0.0:
                    continue
                for k in range(L - j):
                    C[i, j + k] += a * B[i, k]
        return C

    @numba.njit(cache=True)
    def exp_rows_numba(A):
        n, L = A.shape
        F = np.zeros((n, L))
        for i in range(n):
            F[i, 0] = np.exp(A[i, 0])
            for k in range(1, L):
                acc = 0.0
                for j in range(1, k + 1):
                    acc += j * A[i, j] * F[i, k - j]
                F[i, k] = acc / k
        return F

    @numba.njit(cache=True)
    def logsumexp_parts_numba(ell, Vq, y):
        n, m = Vq.shape
        z = np.empty(n)
        for i in range(n):
            acc = ell[i]
            for a in range(m):
                acc += Vq[i, a] * y[a]
            z[i] = acc
        zmax = z.max()
        p = np.exp(z - zmax)
        s = p.sum()
        p /= s
        g = np.zeros(m)
        H = np.zeros((m, m))
        for i in range(n):
            for a in range(m):
                g[a] += p[i] * Vq[i, a]
                for b in range(m):
                    H[a, b] += p[i] * Vq[i, a] * Vq[i, b]
        for a in range(m):
            for b in range(m):
                H[a, b] -= g[a] * g[b]
        return zmax + np.log(s), g, H

    @numba.njit(cache=True)
    def trop_grid_numba(C, V, P):
        npts, r = P.shape
        n = C.shape[0]
        out = np.empty(npts)
        for k in range(npts):
            best = np.inf
            for i in range(n):
                acc = C[i]
                for a in range(r):
                    acc += V[i, a] * P[k, a]
                if acc < best:
                    best = acc
            out[k] = best
        return out

else:  # pragma: no cover
    conv_rows_numba = conv_rows_numpy
    exp_rows_numba = exp_rows_numpy
    logsumexp_parts_numba = logsumexp_parts_numpy
    trop_grid_numba = trop_grid_numpy


if USE_NUMBA:
    conv_rows = conv_rows_numba
    exp_rows = exp_rows_numba
    logsumexp_parts = logsumexp_parts_numba
    trop_grid = trop_grid_numba
else:
    conv_rows = conv_rows_numpy
    exp_rows = exp_rows_numpy
    logsumexp_parts = logsumexp_parts_numpy
    trop_grid = trop_grid_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def warmup() -> None:
    """Trigger JIT compilation so later timings measure steady-state work."""
    A = np.zeros((2, 4))
    A[:, 1] = 1.0
    conv_rows(A, A)
    exp_rows(A)
    logsumexp_parts(np.zeros(2), np.array([[1.0], [-1.0]]), np.zeros(1))
    trop_grid(np.zeros(2), np.array([[1.0], [-1.0]]), np.zeros((3, 1)))
