"""Positive Laurent polynomials and their tropicalization."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NotComplete, NotPositive
from .ratgeom import (
    Subspace,
    dot,
    is_complete,
    lowest_point,
    max_min_weight,
    vec,
)
from .series import INF, PuiseuxSeries, as_fraction


@dataclass(frozen=True)
class LaurentPoly:
    """W = sum_i gamma_i x^{v_i} with positive series coefficients gamma_i."""

    dim: int
    terms: tuple  # of (PuiseuxSeries, tuple[Fraction, ...])

    def __post_init__(self):
        seen = set()
        for g, v in self.terms:
            if len(v) != self.dim:
                raise DimensionMismatch(f"exponent {v} on a {self.dim}-torus")
            if not g.is_positive:
                raise NotPositive(f"coefficient of x^{tuple(map(str, v))} is not positive")
            if v in seen:
                raise ValueError(f"repeated exponent {tuple(map(str, v))}")
            seen.add(v)

    @classmethod
    def from_terms(cls, dim: int, pairs) -> "LaurentPoly":
        """Build from ``(coefficient, exponent)`` pairs, merging repeated exponents.

        A coefficient may be a PuiseuxSeries or a plain positive number.
        """
        acc: dict[tuple, PuiseuxSeries] = {}
        order = []
        for g, v in pairs:
            v = vec(v)
            if not isinstance(g, PuiseuxSeries):
                g = PuiseuxSeries.constant(float(g))
            if v in acc:
                acc[v] = acc[v] + g
            else:
                acc[v] = g
                order.append(v)
        return cls(dim, tuple((acc[v], v) for v in order))

    @classmethod
    def from_monomials(cls, dim: int, items) -> "LaurentPoly":
        """Build from ``(valuation, coefficient, exponent)`` triples, i.e. coeff * t^val * x^v."""
        return cls.from_terms(
            dim, [(PuiseuxSeries.monomial(as_fraction(e), float(c)), v) for e, c, v in items]
        )

    def __len__(self):
        return len(self.terms)

    @cached_property
    def vals(self) -> tuple:
        return tuple(g.val for g, _ in self.terms)

    @cached_property
    def vectors(self) -> tuple:
        return tuple(v for _, v in self.terms)

    @cached_property
    def lead_coeffs(self) -> np.ndarray:
        return np.array([g.leading_coeff() for g, _ in self.terms])

    @cached_property
    def complete(self) -> bool:
        return is_complete(self.vectors, self.dim)

    def require_complete(self) -> None:
        if not self.complete:
            raise NotComplete(
                "the Newton polytope must be full-dimensional with the origin in its "
                "interior; otherwise no positive critical point exists"
            )

    def lifted_points(self) -> list[tuple]:
        """The points (Val(gamma_i), v_i) spanning the augmented Newton polytope."""
        return [(c,) + v for c, v in zip(self.vals, self.vectors)]

    def shifted(self, d) -> "LaurentPoly":
        """Multiply each coefficient by t^{<v_i, d>}."""
        d = vec(d)
        return LaurentPoly(self.dim, tuple((g.shift(dot(v, d)), v) for g, v in self.terms))

    def transformed(self, M) -> "LaurentPoly":
        """Change of character basis v -> M v (M an integer matrix)."""
        M = [vec(row) for row in M]
        return LaurentPoly(
            self.dim, tuple((g, tuple(dot(row, v) for row in M)) for g, v in self.terms)
        )

    def __str__(self):
        parts = []
        for g, v in self.terms:
            parts.append(f"({g})*x^({', '.join(map(str, v))})")
        return " + ".join(parts)


def trop_eval(W: LaurentPoly, d) -> Fraction:
    """Trop(W)(d) = min_i c_i + <v_i, d>."""
    d = vec(d)
    if len(d) != W.dim:
        raise DimensionMismatch(f"point of length {len(d)} for a {W.dim}-torus")
    return min(c + dot(v, d) for c, v in zip(W.vals, W.vectors))


def trop_max(W: LaurentPoly) -> Fraction:
    """Maximum of Trop(W), computed as the lowest point of the augmented Newton polytope."""
    W.require_complete()
    tau, _ = lowest_point(list(zip(W.vals, W.vectors)))
    return tau


def polytope_membership(W: LaurentPoly, d) -> bool:
    """Whether Trop(W)(d) >= 0."""
    return trop_eval(W, d) >= 0


@dataclass
class LevelData:
    d: tuple
    tau_val: Fraction
    deltas: tuple
    levels: tuple
    below: dict = field(repr=False)  # level -> span of v_i with delta_i < level
    upto: dict = field(repr=False)  # level -> span of v_i with delta_i <= level

    def active(self, eps) -> list[int]:
        return [i for i, x in enumerate(self.deltas) if x == eps]


def level_data(W: LaurentPoly, d) -> LevelData:
    d = vec(d)
    tau = trop_eval(W, d)
    deltas = tuple(c + dot(v, d) - tau for c, v in zip(W.vals, W.vectors))
    levels = tuple(sorted(set(deltas)))
    below, upto = {}, {}
    for eps in levels:
        below[eps] = Subspace(W.dim, [v for v, x in zip(W.vectors, deltas) if x < eps])
        upto[eps] = Subspace(W.dim, [v for v, x in zip(W.vectors, deltas) if x <= eps])
    return LevelData(d, tau, deltas, levels, below, upto)


@dataclass
class LevelCertificate:
    level: Fraction
    indices: tuple
    min_weight: Fraction | None  # exact LP optimum; > 0 means pass
    weights: tuple | None

    @property
    def passed(self) -> bool:
        return self.min_weight is not None and self.min_weight > 0


@dataclass
class TropCritCertificate:
    d: tuple
    levels: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.levels)

    def __bool__(self):
        return self.passed


def check_tropical_critical(W: LaurentPoly, d) -> TropCritCertificate:
    """Per level, test that 0 is a strictly positive combination of the level's
    exponents modulo the span of all lower levels.

    The strict combination is exhibited by maximizing the minimum weight in an
    exact LP; the stored weights satisfy sum_i r_i v_i in B_{<eps} exactly.
    """
    ld = level_data(W, d)
    certs = []
    for eps in ld.levels:
        idx = ld.active(eps)
        below = ld.below[eps]
        images = [below.reduce(W.vectors[i]) for i in idx]
        if images and len(images[0]) == 0:
            # everything below already spans the space: the condition is vacuous
            m = Fraction(1, len(idx))
            w = tuple(m for _ in idx)
        else:
            m, w = max_min_weight(images)
        certs.append(LevelCertificate(eps, tuple(idx), m, w))
    return TropCritCertificate(ld.d, certs)


def _orthonormal(sub: Subspace) -> np.ndarray:
    """Float orthonormal basis (columns) of an exact subspace."""
    if sub.dim == 0:
        return np.zeros((sub.ambient, 0))
    M = np.array([[float(x) for x in b] for b in sub.basis]).T
    q, _ = np.linalg.qr(M)
    return q


def projection_residual(x: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Component of x orthogonal to the column span of Q (Q orthonormal)."""
    if Q.shape[1] == 0:
        return x
    return x - Q @ (Q.T @ x)


def check_coeff_conditions(W: LaurentPoly, d_crit, d, tol: float = 1e-9) -> bool:
    """Whether sum_{delta_i = eps} Coeff(gamma_i) e^{<v_i, d>} v_i lies in B_{<eps}
    for every level, up to ``tol`` relative to the largest term."""
    ld = level_data(W, d_crit)
    d = np.asarray(d, dtype=float)
    V = np.array([[float(x) for x in v] for v in W.vectors]).reshape(len(W), W.dim)
    b = W.lead_coeffs * np.exp(V @ d)
    for eps in ld.levels:
        idx = ld.active(eps)
        vecsum = (b[idx, None] * V[idx]).sum(axis=0)
        scale = max(np.abs(b[idx, None] * V[idx]).max(), 1e-300)
        res = projection_residual(vecsum, _orthonormal(ld.below[eps]))
        if np.linalg.norm(res) >= tol * scale:
            return False
    return True


@dataclass
class GridResult:
    best: Fraction  # exact value at the best grid point
    argmax: tuple
    exceeds: list  # grid points (exact) with value > bound
    step: tuple


def trop_grid_max(W: LaurentPoly, lo, hi, n: int, bound=None) -> GridResult:
    """Brute-force maximization of Trop(W) over an n^r rational grid in [lo, hi]^r.

    Values are screened with a float kernel; candidates near the maximum or
    above ``bound`` are re-evaluated exactly.
    """
    r = W.dim
    lo = [as_fraction(x) for x in (lo if isinstance(lo, (list, tuple)) else [lo] * r)]
    hi = [as_fraction(x) for x in (hi if isinstance(hi, (list, tuple)) else [hi] * r)]
    step = tuple((h - l) / (n - 1) for l, h in zip(lo, hi))
    axes = [np.array([float(l + k * s) for k in range(n)]) for l, s in zip(lo, step)]
    mesh = np.meshgrid(*axes, indexing="ij")
    P = np.stack([m.ravel() for m in mesh], axis=1)
    idx = np.stack(
        [m.ravel() for m in np.meshgrid(*[np.arange(n)] * r, indexing="ij")], axis=1
    )
    C = np.array([float(c) for c in W.vals])
    V = np.array([[float(x) for x in v] for v in W.vectors])
    vals = kernels.trop_grid(C, V, P)
    top = vals.max()
    cutoff = top - 1e-9 * (1 + abs(top))
    if bound is not None:
        cutoff = min(cutoff, float(bound) - 1e-9 * (1 + abs(float(bound))))
    cand = np.nonzero(vals >= cutoff)[0]
    best, arg = None, None
    exceeds = []
    for k in cand:
        pt = tuple(l + int(j) * s for l, j, s in zip(lo, idx[k], step))
        val = trop_eval(W, pt)
        if best is None or val > best:
            best, arg = val, pt
        if bound is not None and val > bound:
            exceeds.append(pt)
    return GridResult(best, arg, exceeds, step)


__all__ = [
    "INF",
    "LaurentPoly",
    "LevelData",
    "level_data",
    "trop_eval",
    "trop_max",
    "polytope_membership",
    "check_tropical_critical",
    "check_coeff_conditions",
    "trop_grid_max",
]
