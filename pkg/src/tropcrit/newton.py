"""Newton-datum recursion producing the exact tropical critical point.

Each stage works in the quotient of Q^{1+r} by the flag accumulated so far.
It discards points lying on the image of the height axis, finds the lowest
height at which that axis meets the hull of the remaining points, and adds the
directions of the minimal face through that point to the flag.  After at most
r stages the flag is a hyperplane transversal to the height axis, and the
covector (1, d) vanishing on it gives d_crit.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import InvariantViolation, NotComplete
from .ratgeom import (
    Subspace,
    is_complete,
    lowest_height,
    minimal_face_support,
    solve_vanishing_hyperplane,
)
from .tropical import LaurentPoly, check_tropical_critical, trop_eval, trop_max

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StageRecord:
    tau_bar: Fraction
    support: tuple  # indices into the original term list
    basis: tuple  # spanning vectors of the new flag piece, original coordinates


@dataclass(frozen=True)
class NewtonDatum:
    r: int
    points: tuple  # (c_i, v_i) in Q^{1+r}, original coordinates
    current: tuple  # indices of the points still in play
    flag: Subspace
    stages: tuple = ()

    @property
    def stage(self) -> int:
        return len(self.stages)

    @property
    def remaining_dim(self) -> int:
        """Dimension of the current quotient of the character space."""
        return self.r - self.flag.dim

    def axis_image(self) -> tuple:
        return self.flag.reduce((1,) + (0,) * self.r)

    def images(self, indices=None) -> list[tuple]:
        idx = self.current if indices is None else indices
        return [self.flag.reduce(self.points[i]) for i in idx]


def build_datum(W: LaurentPoly) -> NewtonDatum:
    W.require_complete()
    pts = tuple(tuple(p) for p in W.lifted_points())
    return NewtonDatum(W.dim, pts, tuple(range(len(pts))), Subspace(W.dim + 1))


def _on_axis(x, axis) -> bool:
    """Whether x is a multiple of the (nonzero) vector axis."""
    j = next(k for k, a in enumerate(axis) if a != 0)
    lam = x[j] / axis[j]
    return all(xi == lam * ai for xi, ai in zip(x, axis))


def recursion_step(datum: NewtonDatum, check_complete: bool = True) -> NewtonDatum:
    if datum.remaining_dim <= 0:
        raise InvariantViolation("recursion already finished")
    axis = datum.axis_image()
    if not any(axis):
        raise InvariantViolation("height axis collapsed into the flag")
    reduced = tuple(i for i in datum.current if not _on_axis(datum.flag.reduce(datum.points[i]), axis))
    imgs = datum.images(reduced)

    if check_complete:
        # projected exponents must stay complete in V / (flag + axis)
        quot = datum.flag.extend([(1,) + (0,) * datum.r])
        proj = [quot.reduce(datum.points[i]) for i in reduced]
        if not is_complete(proj, datum.remaining_dim):
            raise InvariantViolation(f"stage {datum.stage + 1}: projected datum is not complete")

    res = lowest_height(imgs, axis)
    if not res.ok:
        raise InvariantViolation(f"stage {datum.stage + 1}: lowest-height LP is {res.status}")
    tau_bar = res.optimum
    if datum.stages and not tau_bar > datum.stages[-1].tau_bar:
        raise InvariantViolation("stage heights failed to increase")
    target = tuple(tau_bar * a for a in axis)
    face = minimal_face_support(imgs, target)
    support = tuple(reduced[k] for k in face.indices)
    new_vecs = []
    for i in support:
        p = datum.points[i]
        new_vecs.append((p[0] - tau_bar,) + tuple(p[1:]))
    flag = datum.flag.extend(new_vecs)
    if flag.dim == datum.flag.dim:
        raise InvariantViolation("stage added no new directions to the flag")
    if flag.contains((1,) + (0,) * datum.r):
        raise InvariantViolation("flag swallowed the height axis")
    rec = StageRecord(tau_bar, support, tuple(Subspace(datum.r + 1, new_vecs).basis))
    log.debug("stage %d: tau_bar=%s support=%s dim=%d", datum.stage + 1, tau_bar, support, flag.dim)
    return replace(datum, current=reduced, flag=flag, stages=datum.stages + (rec,))


@dataclass(frozen=True)
class CanonicalPoint:
    d_crit: tuple
    tilde_d_crit: tuple
    tau: Fraction
    stages: tuple = field(default=())

    def trace(self) -> list[dict]:
        return [
            {
                "tau_bar": str(s.tau_bar),
                "support": list(s.support),
                "flag_basis": [[str(x) for x in b] for b in s.basis],
            }
            for s in self.stages
        ]


def canonical_point(W: LaurentPoly, self_check: bool = True) -> CanonicalPoint:
    """Exact tropical critical point d_crit of a complete W."""
    datum = build_datum(W)
    while datum.remaining_dim > 0:
        datum = recursion_step(datum, check_complete=self_check)
    a = solve_vanishing_hyperplane(datum.flag)
    tau = trop_max(W)
    cp = CanonicalPoint(a, (Fraction(1),) + a, tau, datum.stages)
    if self_check:
        if trop_eval(W, a) != tau:
            raise InvariantViolation(f"Trop(W)(d_crit) = {trop_eval(W, a)} but max is {tau}")
        if not check_tropical_critical(W, a).passed:
            raise InvariantViolation("d_crit fails the tropical critical conditions")
    return cp


__all__ = [
    "NewtonDatum",
    "StageRecord",
    "CanonicalPoint",
    "build_datum",
    "recursion_step",
    "canonical_point",
    "NotComplete",
]
