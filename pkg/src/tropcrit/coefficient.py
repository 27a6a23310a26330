"""Leading coefficient of the positive critical point.

Level by level, the coefficient conditions ask for a convex minimization of a
positive sum of exponentials on the quotient B_{<=eps} / B_{<eps}; the
minimizer corrects the current log-coefficient vector inside
B_{<=eps} ∩ B_{<eps}^⊥.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvariantViolation, MaxIterExceeded
from .ratgeom import dot, is_complete
from .tropical import LaurentPoly, LevelData, _orthonormal, level_data


@dataclass
class Level:
    eps: object  # Fraction
    active: list
    Q: np.ndarray  # orthonormal basis of B_{<=eps} ∩ B_{<eps}^⊥ (columns)
    Q_upto: np.ndarray  # orthonormal basis of B_{<=eps}


def level_geometry(W: LaurentPoly, ld: LevelData) -> list[Level]:
    """Per level: active terms and the float bases used by the coefficient and
    lifting solvers.  The complement is computed exactly, then orthonormalized."""
    out = []
    for eps in ld.levels:
        below, upto = ld.below[eps], ld.upto[eps]
        comp = below.orth_complement_in(upto)
        out.append(Level(eps, ld.active(eps), _orthonormal(comp), _orthonormal(upto)))
    return out


def _check_level_complete(W, ld, eps, idx):
    """The active exponents must be complete in B_{<=eps} / B_{<eps}."""
    below, upto = ld.below[eps], ld.upto[eps]
    comp = below.orth_complement_in(upto)
    imgs = [tuple(dot(W.vectors[i], q) for q in comp.basis) for i in idx]
    if comp.dim and not is_complete(imgs, comp.dim):
        raise InvariantViolation(f"level {eps}: projected exponents are not complete")


MAX_STEP = 4.0  # longest Newton step, in units of the log-coefficients


def minimize_logsumexp(ell, Vq, y0=None, tol: float = 1e-12, max_iter: int = 200):
    """Damped Newton for y -> log sum_i exp(ell_i + <Vq_i, y>).

    Convergence: gradient norm below ``tol`` times the largest |Vq_i|.
    """
    n, m = Vq.shape
    y = np.zeros(m) if y0 is None else np.array(y0, dtype=float)
    scale = max(np.abs(Vq).max(), 1.0)
    val, g, H = kernels.logsumexp_parts(ell, Vq, y)
    for _ in range(max_iter):
        if np.linalg.norm(g) < tol * scale:
            return y
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = -g
        if not float(g @ step) < 0:
            # far from the minimizer H is numerically singular
            step = -g
        # log-sum-exp is flat far out: cap the step instead of trusting H there
        norm = np.linalg.norm(step)
        if norm > MAX_STEP:
            step *= MAX_STEP / norm
        t = 1.0
        if -float(g @ step) < 1e-14 * (1.0 + abs(val)):
            # decrement below value resolution: the line search cannot see
            # progress any more, but the full Newton step is already in the
            # quadratic regime
            y = y + step
            val, g, H = kernels.logsumexp_parts(ell, Vq, y)
            continue
        while True:
            y_new = y + t * step
            v_new, g_new, H_new = kernels.logsumexp_parts(ell, Vq, y_new)
            if v_new <= val + 1e-4 * t * float(g @ step) or t < 1e-12:
                break
            t *= 0.5
        if t < 1e-12 and v_new > val:
            # no further descent possible in floating point
            if np.linalg.norm(g) < 1e-9 * scale:
                return y
            raise MaxIterExceeded("line search failed", best=y)
        y, val, g, H = y_new, v_new, g_new, H_new
    if np.linalg.norm(g) < tol * scale:
        return y
    raise MaxIterExceeded(f"Newton did not converge in {max_iter} iterations", best=y)


def solve_coeff(
    W: LaurentPoly,
    d_crit,
    tol: float = 1e-12,
    max_iter: int = 200,
    seed: int | None = None,
) -> np.ndarray:
    """The log-coefficient vector d_coeff satisfying the coefficient conditions.

    With ``seed`` set, each level's Newton iteration starts from a random
    point instead of the origin (used to probe uniqueness).
    """
    ld = level_data(W, d_crit)
    levels = level_geometry(W, ld)
    V = np.array([[float(x) for x in v] for v in W.vectors]).reshape(len(W), W.dim)
    logc = np.log(W.lead_coeffs)
    rng = np.random.default_rng(seed) if seed is not None else None
    d = np.zeros(W.dim)
    for lev in levels:
        if lev.Q.shape[1] == 0:
            continue
        _check_level_complete(W, ld, lev.eps, lev.active)
        idx = lev.active
        ell = logc[idx] + V[idx] @ d
        Vq = V[idx] @ lev.Q
        y0 = None if rng is None else rng.normal(scale=2.0, size=lev.Q.shape[1])
        try:
            y = minimize_logsumexp(ell, Vq, y0, tol, max_iter)
        except MaxIterExceeded as exc:
            best = d + lev.Q @ exc.best
            raise MaxIterExceeded(f"level {lev.eps}: {exc}", best=best) from None
        d = d + lev.Q @ y
    return d


def level_hessians(W: LaurentPoly, d_crit, d_coeff, levels=None) -> list[np.ndarray]:
    """The forms B_h = Q_h^T (sum_{delta_i = eps_h} b_i v_i v_i^T) Q_h per level."""
    if levels is None:
        levels = level_geometry(W, level_data(W, d_crit))
    V = np.array([[float(x) for x in v] for v in W.vectors]).reshape(len(W), W.dim)
    b = W.lead_coeffs * np.exp(V @ np.asarray(d_coeff, dtype=float))
    out = []
    for lev in levels:
        idx = lev.active
        Vq = V[idx] @ lev.Q
        out.append((Vq * b[idx, None]).T @ Vq)
    return out
