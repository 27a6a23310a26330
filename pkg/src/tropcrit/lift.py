"""Recursive lifting of the positive critical point to a finite order.

The point is kept in the form p = e^{d_coeff} t^{d_crit} exp(w).  Every
exponent of w, and of G(p) / t^tau, lies on a lattice (1/D) Z_{>=0}, so the
engine stores all series as dense arrays indexed by lattice step and uses the
convolution / exponential kernels.  Each step reads off the lowest nonzero
coefficient C of G(p) / t^tau at relative order nu, finds the smallest level
eps_h with C in B_{<=eps_h}, and corrects w at order nu - eps_h by the vector
u' solving B_h u' = -(component of C outside B_{<eps_h}).

The residual certificate is recomputed afterwards from the output series by
an independent sparse evaluation of G.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .coefficient import level_geometry, level_hessians, solve_coeff
from .errors import DimensionMismatch, InvariantViolation, StalledProgress
from .newton import CanonicalPoint, canonical_point
from .series import INF, PuiseuxSeries, TorusPoint, add, as_fraction, eval_character, exp_noise_scale, exp_series
from .tropical import LaurentPoly, level_data, projection_residual

log = logging.getLogger(__name__)

RESIDUAL_CLEANUP = 1e-10
# relative rounding carried by the arguments <v_i, w> themselves, including
# what a correction step leaves behind (a few thousand machine epsilons); it
# enters the gradient linearly
ARG_ROUNDING = 1e-12


def _abs_series(s: PuiseuxSeries) -> PuiseuxSeries:
    return PuiseuxSeries(tuple((e, abs(c)) for e, c in s.terms), s.trunc)


def term_values(W: LaurentPoly, p: TorusPoint):
    """gamma_i p^{v_i} for every term, with a coefficientwise noise scale.

    The scale is |gamma_i| e^{<v_i,u>} t^{<v_i,d>} times the size of the
    products summed in the exponential recurrence for each coefficient, plus
    the linear effect of rounding in the argument <v_i, w>, weighted so that
    ``RESIDUAL_CLEANUP`` times the scale allows ``ARG_ROUNDING`` relative
    error there.
    """
    if p.dim != W.dim:
        raise DimensionMismatch(f"{p.dim}-dimensional point for a {W.dim}-torus")
    vals, majors = [], []
    for g, v in W.terms:
        arg = PuiseuxSeries.zero()
        arg_abs = PuiseuxSeries.zero()
        for vj, wj in zip(v, p.w):
            if vj != 0:
                arg = add(arg, wj.scale(float(vj)), cleanup=0.0)
                arg_abs = add(arg_abs, _abs_series(wj).scale(abs(float(vj))), cleanup=0.0)
        if arg.is_zero:
            ex = PuiseuxSeries.constant(1.0, arg.trunc)
            ex_abs = ex
        else:
            ex = exp_series(arg)
            ex_abs = exp_noise_scale(arg, ex)
            if not arg_abs.is_zero:
                ex_abs = ex_abs + (_abs_series(ex) * arg_abs).scale(ARG_ROUNDING / RESIDUAL_CLEANUP)
        s = math.exp(sum(float(a) * b for a, b in zip(v, p.u)))
        e = sum((a * b for a, b in zip(v, p.d)), Fraction(0))
        vals.append(g * ex.scale(s).shift(e))
        majors.append(_abs_series(g) * ex_abs.scale(s).shift(e))
    return vals, majors


def _sum_with_majorant(contribs, majors, trunc, cleanup):
    """Sum contributions; drop coefficients below ``cleanup`` times their majorant."""
    acc: dict = {}
    scale: dict = {}
    for e, c in contribs:
        if e < trunc:
            acc[e] = acc.get(e, 0.0) + c
    for e, c in majors:
        if e < trunc:
            scale[e] = scale.get(e, 0.0) + abs(c)
    terms = tuple(
        (e, acc[e]) for e in sorted(acc) if acc[e] != 0.0 and abs(acc[e]) > cleanup * scale.get(e, 0.0)
    )
    return PuiseuxSeries(terms, trunc)


def _weighted_sum(vals, majors, weights, cleanup):
    contribs, mcontribs = [], []
    trunc = INF
    for s, m, k in zip(vals, majors, weights):
        if k == 0.0:
            continue
        trunc = min(trunc, s.trunc)
        contribs.extend((e, c * k) for e, c in s.terms)
        mcontribs.extend((e, c * abs(k)) for e, c in m.terms)
    return _sum_with_majorant(contribs, mcontribs, trunc, cleanup)


def gradient_G(W: LaurentPoly, p: TorusPoint, cleanup: float = RESIDUAL_CLEANUP) -> list:
    """G(p) = sum_i gamma_i p^{v_i} v_i, one series per coordinate.

    Coefficients smaller than ``cleanup`` times their rounding majorant are
    treated as zero.
    """
    vals, majors = term_values(W, p)
    return [
        _weighted_sum(vals, majors, [float(v[j]) for v in W.vectors], cleanup)
        for j in range(W.dim)
    ]


def residual_valuation(G: list) -> Fraction | float:
    """Smallest valuation among the coordinates of G (truncation bound if all vanish)."""
    return min(g.lower_bound() for g in G) if G else INF


@dataclass
class LiftState:
    """Dense working state of the lifting recursion (single owner, mutable)."""

    tau: Fraction
    levels: list  # coefficient.Level per eps, ascending
    hess: list  # B_h per level
    V: np.ndarray  # n x r exponents
    T: np.ndarray  # n x L: t^{delta_i} * gamma_i t^{-c_i} * e^{<v_i, d_coeff>}
    D: int
    L: int
    w: np.ndarray  # r x L
    A: np.ndarray  # n x L, the series <v_i, w> kept term by term
    A_abs: np.ndarray  # n x L, accumulated |V| |u'|: the rounding size of A
    deltas: tuple = ()
    zero_tol: float = 1e-10
    member_tol: float = 1e-8
    nu: Fraction | None = None
    h: int | None = None
    done: bool = False
    log: list = field(default_factory=list)
    rng: object = None  # set to probe representative independence
    steps: int = 0

    def gradient(self):
        E = kernels.exp_rows(self.A)
        TE = kernels.conv_rows(self.T, E)
        # size of the products summed for every coefficient, including the
        # exponential recurrence k E_k = sum_j j A_j E_{k-j}
        absE = np.abs(E)
        k = np.arange(self.L, dtype=float)
        rec = kernels.conv_rows(np.abs(self.A) * k[None, :], absE)
        rec[:, 1:] /= k[None, 1:]
        # rounding carried in A itself (sums of cancelling updates) enters linearly
        carried = kernels.conv_rows(absE, self.A_abs) * (ARG_ROUNDING / self.zero_tol)
        scale = np.abs(self.V).T @ kernels.conv_rows(np.abs(self.T), absE + rec + carried)
        return self.V.T @ TE, scale.max(axis=0)


def _lattice_denominator(values) -> int:
    D = 1
    for x in values:
        D = math.lcm(D, Fraction(x).denominator)
    return D


def init_lift(W: LaurentPoly, d_crit, d_coeff, horizon) -> LiftState:
    """Dense state for lifting through relative order ``horizon`` (exclusive)."""
    ld = level_data(W, d_crit)
    levels = level_geometry(W, ld)
    hess = level_hessians(W, d_crit, d_coeff, levels)
    horizon = as_fraction(horizon)
    gaps = []
    for (g, _), c in zip(W.terms, W.vals):
        gaps.extend(e - c for e, _ in g.terms)
    D = _lattice_denominator(list(ld.deltas) + gaps + [horizon])
    L = int(horizon * D)
    V = np.array([[float(x) for x in v] for v in W.vectors]).reshape(len(W), W.dim)
    scale = np.exp(V @ np.asarray(d_coeff, dtype=float))
    T = np.zeros((len(W), L))
    for i, ((g, _), c, dl) in enumerate(zip(W.terms, W.vals, ld.deltas)):
        for e, coef in g.terms:
            k = (dl + e - c) * D
            if k < L:
                T[i, int(k)] = coef * scale[i]
    return LiftState(ld.tau_val, levels, hess, V, T, D, L, np.zeros((W.dim, L)),
                     np.zeros((len(W), L)), np.zeros((len(W), L)), ld.deltas)


def lift_step(W: LaurentPoly, state: LiftState) -> LiftState:
    """One correction p <- p * exp(t^{nu - eps_h} u')."""
    G, scale = state.gradient()
    mag = np.abs(G).max(axis=0)
    nz = np.nonzero(mag > state.zero_tol * scale)[0]
    if len(nz) == 0:
        state.done = True
        state.nu = Fraction(state.L, state.D)
        return state
    k0 = int(nz[0])
    nu = Fraction(k0, state.D)
    C = G[:, k0]
    h = None
    allowed = max(state.member_tol * np.linalg.norm(C), state.zero_tol * scale[k0])
    for idx, lev in enumerate(state.levels):
        if np.linalg.norm(projection_residual(C, lev.Q_upto)) <= allowed:
            h = idx
            break
    if h is None:
        raise InvariantViolation(f"gradient coefficient at order {nu} is not in the top level span")
    lev = state.levels[h]
    if not lev.eps < nu:
        raise InvariantViolation(f"level {lev.eps} is not below the residual order {nu}")
    if state.nu is not None:
        if nu < state.nu or (nu == state.nu and h >= state.h):
            raise StalledProgress(
                f"no progress: (nu, level) went from ({state.nu}, {state.levels[state.h].eps}) "
                f"to ({nu}, {lev.eps})"
            )
    z = -np.linalg.solve(state.hess[h], lev.Q.T @ C)
    u = lev.Q @ z
    # <v_i, u'> vanishes exactly for terms below the level; keep it exactly zero
    du = state.V @ u
    du_abs = np.abs(state.V) @ np.abs(u)
    for i, dl in enumerate(state.deltas):
        if dl < lev.eps:
            du[i] = du_abs[i] = 0.0
    if state.rng is not None:
        # any B_{<=eps_h}^⊥ component is a valid representative choice; it
        # pairs to zero with every term up to and including the level
        extra = projection_residual(state.rng.normal(size=len(u)), lev.Q_upto)
        extra *= np.linalg.norm(u)
        dx = state.V @ extra
        dx_abs = np.abs(state.V) @ np.abs(extra)
        for i, dl in enumerate(state.deltas):
            if dl <= lev.eps:
                dx[i] = dx_abs[i] = 0.0
        u = u + extra
        du = du + dx
        du_abs = du_abs + dx_abs
    s = k0 - int(lev.eps * state.D)
    state.w[:, s] += u
    state.A[:, s] += du
    state.A_abs[:, s] += du_abs
    state.nu, state.h = nu, h
    state.steps += 1
    state.log.append((nu, lev.eps, tuple(float(x) for x in u)))
    log.debug("lift step %d: nu=%s eps_h=%s |u'|=%.3g", state.steps, nu, lev.eps, np.linalg.norm(u))
    return state


@dataclass
class CritResult:
    W: LaurentPoly
    d_crit: tuple
    d_coeff: tuple
    w_crit: tuple
    tau: Fraction
    order: Fraction | float  # order through which w_crit is exact (inf: exact point)
    requested_order: Fraction
    residual_valuation: Fraction | float
    canonical: CanonicalPoint
    deltas: tuple
    levels: tuple
    lift_log: list
    nondegeneracy: object = None

    def point(self) -> TorusPoint:
        return TorusPoint(tuple(self.d_coeff), tuple(self.d_crit), tuple(self.w_crit))

    @property
    def exact(self) -> bool:
        return self.order == INF

    @property
    def residual_ok(self) -> bool:
        target = self.tau + (self.requested_order if self.order == INF else self.order)
        return self.residual_valuation >= target

    def coordinates(self, order=None) -> list:
        p = self.point()
        rel = self.order if order is None else min(as_fraction(order), self.order)
        out = []
        for j in range(p.dim):
            v = [0] * p.dim
            v[j] = 1
            s = eval_character(p, v, None if rel == INF else rel)
            out.append(s)
        return out


def solve_critical(
    W: LaurentPoly,
    trunc_order=3,
    tol: float = 1e-9,
    probe_seed: int | None = None,
    coeff_seed: int | None = None,
    max_steps: int | None = None,
) -> CritResult:
    """Positive critical point of a complete W through relative order ``trunc_order``.

    The recursion runs until the gradient vanishes below relative order
    ``trunc_order + eps_max``, which makes every term of w below
    ``trunc_order`` final.  If the input coefficients are truncated too early
    the achieved order is clamped and reported.
    """
    N = as_fraction(trunc_order)
    if not N > 0:
        raise ValueError("trunc_order must be positive")
    canon = canonical_point(W)
    d_crit = canon.d_crit
    d_coeff = solve_coeff(W, d_crit, seed=coeff_seed)
    ld = level_data(W, d_crit)
    eps_max = max(ld.levels)

    horizon = N + eps_max
    known = min(
        (g.trunc - c + dl for (g, _), c, dl in zip(W.terms, W.vals, ld.deltas)),
        default=INF,
    )
    if known < horizon:
        horizon = known
    order = horizon - eps_max
    if not order > 0:
        raise ValueError(f"input coefficients are truncated too early (known through {known})")

    state = init_lift(W, d_crit, d_coeff, horizon)
    state.member_tol = max(tol * 10, 1e-8)
    if probe_seed is not None:
        state.rng = np.random.default_rng(probe_seed)
    limit = max_steps or (state.L * (len(ld.levels) + 1) + 16)
    while not state.done:
        if state.steps >= limit:
            raise StalledProgress(f"no convergence within {limit} lifting steps")
        lift_step(W, state)

    w_series = []
    for j in range(W.dim):
        pairs = [(Fraction(k, state.D), state.w[j, k]) for k in range(1, state.L)
                 if state.w[j, k] != 0.0 and Fraction(k, state.D) < order]
        w_series.append(PuiseuxSeries.from_terms(pairs, order, cleanup=0.0))

    # exact critical point: nothing to lift and every input coefficient exact
    if state.steps == 0 and known == INF:
        exact_w = tuple(PuiseuxSeries.zero() for _ in range(W.dim))
        p = TorusPoint(tuple(float(x) for x in d_coeff), tuple(d_crit), exact_w)
        G = gradient_G(W, p)
        if all(g.is_zero and g.trunc == INF for g in G):
            w_series = list(exact_w)
            order = INF

    p = TorusPoint(tuple(float(x) for x in d_coeff), tuple(d_crit), tuple(w_series))
    G = gradient_G(W, p)
    return CritResult(
        W=W,
        d_crit=tuple(d_crit),
        d_coeff=tuple(float(x) for x in d_coeff),
        w_crit=tuple(w_series),
        tau=canon.tau,
        order=order,
        requested_order=N,
        residual_valuation=residual_valuation(G),
        canonical=canon,
        deltas=ld.deltas,
        levels=ld.levels,
        lift_log=state.log,
    )


@dataclass
class NondegCertificate:
    directions: list  # (u, valuation, leading coefficient)
    hessian_min_eigs: list  # per level, smallest eigenvalue of B_h
    stronger_condition: str = "unverified"

    @property
    def passed(self) -> bool:
        return all(c > 0 for _, _, c in self.directions) and all(
            e > 0 for e in self.hessian_min_eigs
        )

    def __bool__(self):
        return self.passed


def check_nondegenerate(W: LaurentPoly, result: CritResult, samples: int = 10, seed: int = 0):
    """Second-derivative positivity at the computed critical point.

    For each basis vector and ``samples`` random nonzero integer vectors u,
    H_p(u, u) = sum_i gamma_i <v_i, u>^2 p^{v_i} must have positive leading
    coefficient; additionally every level form B_h must be positive definite.
    """
    p = result.point()
    vals, majors = term_values(W, p)
    rng = np.random.default_rng(seed)
    dirs = [tuple(int(i == j) for j in range(W.dim)) for i in range(W.dim)]
    while len(dirs) < W.dim + samples:
        u = tuple(int(x) for x in rng.integers(-3, 4, size=W.dim))
        if any(u):
            dirs.append(u)
    entries = []
    for u in dirs:
        weights = [float(sum(a * b for a, b in zip(v, u))) ** 2 for v in W.vectors]
        H = _weighted_sum(vals, majors, weights, RESIDUAL_CLEANUP)
        lead = H.leading_coeff() if H.terms else 0.0
        entries.append((u, H.val, lead))
    eigs = [float(np.linalg.eigvalsh(B).min()) if B.size else math.inf
            for B in level_hessians(W, result.d_crit, result.d_coeff)]
    return NondegCertificate(entries, eigs)
