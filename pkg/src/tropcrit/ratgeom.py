"""Exact rational linear algebra and a Bland's-rule simplex solver.

Everything here works over :class:`fractions.Fraction`; there is no rounding
anywhere.  Vectors are tuples of Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    NoPointAboveZero,
    NotTransversal,
    TargetNotInHull,
    WrongDimension,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(xs) -> tuple:
    from .series import as_fraction

    return tuple(as_fraction(x) for x in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def axpy(k, x, y) -> tuple:
    """k*x + y."""
    return tuple(k * a + b for a, b in zip(x, y))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form with leftmost-pivot (lexicographic) ordering.

    Returns ``(rows, pivots)`` with zero rows removed.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                row_r = m[r]
                m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(vectors) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def nullspace(rows, ncols: int) -> list[tuple]:
    """Basis of {x : row . x = 0 for all rows}."""
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(ncols)) for j in range(ncols)]
    R, piv = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_square(A, b) -> tuple:
    """Exact solution of a nonsingular square system."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in R)


class Subspace:
    """Linear subspace of Q^n given by spanning vectors.

    The basis is kept in reduced row echelon form, which makes membership,
    reduction modulo the subspace and the choice of complement deterministic.
    """

    def __init__(self, ambient: int, vectors=()):
        self.ambient = ambient
        vectors = [vec(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in Q^{ambient}")
        nz = [v for v in vectors if any(v)]
        if nz:
            self.basis, self.pivots = rref(nz, ambient)
        else:
            self.basis, self.pivots = [], []
        self.complement = [j for j in range(ambient) if j not in self.pivots]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce_full(self, v) -> tuple:
        """Representative of v + S with zeros in every pivot column."""
        v = list(vec(v))
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f != 0:
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def reduce(self, v) -> tuple:
        """Coordinates of the image of v in Q^n / S (complement coordinates)."""
        r = self.reduce_full(v)
        return tuple(r[j] for j in self.complement)

    def lift(self, coords) -> tuple:
        out = [ZERO] * self.ambient
        for j, c in zip(self.complement, coords):
            out[j] = c
        return tuple(out)

    def contains(self, v) -> bool:
        return not any(self.reduce_full(v))

    def __contains__(self, v):
        return self.contains(v)

    def extend(self, vectors) -> "Subspace":
        return Subspace(self.ambient, list(self.basis) + [vec(v) for v in vectors])

    def orth_complement(self) -> "Subspace":
        return Subspace(self.ambient, nullspace(self.basis, self.ambient))

    def orth_complement_in(self, other: "Subspace") -> "Subspace":
        """other ∩ self^⊥, i.e. the orthogonal complement of self inside other."""
        if not other.basis:
            return Subspace(self.ambient)
        # x = sum_k beta_k o_k with <x, s> = 0 for every basis vector s of self
        rows = [tuple(dot(o, s) for o in other.basis) for s in self.basis]
        coeffs = nullspace(rows, other.dim)
        vecs = []
        for beta in coeffs:
            x = [ZERO] * self.ambient
            for bk, o in zip(beta, other.basis):
                if bk:
                    x = [a + bk * c for a, c in zip(x, o)]
            vecs.append(tuple(x))
        return Subspace(self.ambient, vecs)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def quotient_reduce(vecs, sub_: Subspace) -> list[tuple]:
    """Images of ``vecs`` in Q^n / sub_, in the complement coordinates of sub_."""
    return [sub_.reduce(v) for v in vecs]


def solve_vanishing_hyperplane(flag: Subspace) -> tuple:
    """The unique a with (1, a) orthogonal to every vector of a hyperplane flag.

    ``flag`` must be an r-dimensional subspace of Q^{1+r} not containing the
    first coordinate axis.
    """
    n = flag.ambient
    r = n - 1
    if flag.dim != r:
        raise WrongDimension(f"flag has dimension {flag.dim}, expected {r}")
    e0 = (ONE,) + (ZERO,) * r
    if flag.contains(e0):
        raise NotTransversal("the first coordinate axis lies in the flag")
    if r == 0:
        return ()
    A = [b[1:] for b in flag.basis]
    rhs = [-b[0] for b in flag.basis]
    return solve_square(A, rhs)


# ---------------------------------------------------------------------------
# linear programming


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Fraction | None = None
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _pivot(T, obj, basis, i, j):
    row = T[i]
    p = row[j]
    if p != 1:
        row = [x / p for x in row]
        T[i] = row
    nz = [(k, x) for k, x in enumerate(row) if x != 0]
    for k in range(len(T)):
        if k != i:
            f = T[k][j]
            if f != 0:
                rk = T[k]
                for col, x in nz:
                    rk[col] -= f * x
    f = obj[j]
    if f != 0:
        for col, x in nz:
            obj[col] -= f * x
    basis[i] = j


def _run_simplex(T, obj, basis, allowed):
    """Minimize with Bland's rule.  ``obj`` holds reduced costs, obj[-1] = -z."""
    ncols = len(obj) - 1
    while True:
        enter = None
        for j in range(ncols):
            if allowed[j] and obj[j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        best = None
        leave = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(T, obj, basis, leave, enter)


def lp_solve(c, A_eq=(), b_eq=(), A_ub=(), b_ub=(), free=(), maximize=False) -> LPResult:
    """Exact two-phase simplex.

    Minimizes (or maximizes) ``c . x`` subject to ``A_eq x = b_eq``,
    ``A_ub x <= b_ub`` and ``x >= 0`` for every index not listed in ``free``.
    Never raises for well-formed input: infeasibility and unboundedness are
    reported through ``status``.
    """
    c = vec(c)
    n = len(c)
    free = set(free)
    A_eq = [vec(r) for r in A_eq]
    A_ub = [vec(r) for r in A_ub]
    b_eq = vec(b_eq)
    b_ub = vec(b_ub)
    for r in A_eq + A_ub:
        if len(r) != n:
            raise DimensionMismatch("constraint row length differs from objective")
    if len(A_eq) != len(b_eq) or len(A_ub) != len(b_ub):
        raise DimensionMismatch("constraint matrix and right-hand side disagree")

    # columns: one per nonneg variable, two per free variable, one slack per <= row
    col_of = []  # (orig index, sign)
    for j in range(n):
        col_of.append((j, 1))
        if j in free:
            col_of.append((j, -1))
    nstruct = len(col_of)
    nslack = len(A_ub)
    rows = []
    rhs = []
    for r, b in zip(A_eq, b_eq):
        rows.append([r[j] * s for j, s in col_of] + [ZERO] * nslack)
        rhs.append(b)
    for k, (r, b) in enumerate(zip(A_ub, b_ub)):
        slack = [ZERO] * nslack
        slack[k] = ONE
        rows.append([r[j] * s for j, s in col_of] + slack)
        rhs.append(b)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    nreal = nstruct + nslack
    cost = [c[j] * s for j, s in col_of] + [ZERO] * nslack
    if maximize:
        cost = [-x for x in cost]

    # phase 1 with one artificial per row
    T = []
    for i in range(m):
        art = [ZERO] * m
        art[i] = ONE
        T.append(rows[i] + art + [rhs[i]])
    basis = [nreal + i for i in range(m)]
    ncols = nreal + m
    obj = [ZERO] * (ncols + 1)
    for j in range(nreal):
        obj[j] = -sum((T[i][j] for i in range(m)), ZERO)
    obj[-1] = -sum(rhs, ZERO)
    allowed = [True] * ncols
    _run_simplex(T, obj, basis, allowed)
    if -obj[-1] != 0:
        return LPResult("infeasible")

    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= nreal:
            j = next((j for j in range(nreal) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, obj, basis, i, j)
        i += 1
    T = [row[:nreal] + [row[-1]] for row in T]

    # phase 2
    obj = list(cost) + [ZERO]
    for i, bj in enumerate(basis):
        cb = cost[bj]
        if cb != 0:
            row = T[i]
            for j in range(nreal + 1):
                if row[j] != 0:
                    obj[j] -= cb * row[j]
    status = _run_simplex(T, obj, basis, [True] * nreal)
    if status == "unbounded":
        return LPResult("unbounded")
    xcols = [ZERO] * nreal
    for i, bj in enumerate(basis):
        xcols[bj] = T[i][-1]
    x = [ZERO] * n
    for k, (j, s) in enumerate(col_of):
        x[j] += s * xcols[k]
    opt = dot(c, x)
    return LPResult("optimal", opt, tuple(x))


def lowest_height(points, direction) -> LPResult:
    """min h such that h * direction lies in the convex hull of ``points``.

    The witness holds the convex weights followed by h.
    """
    points = [vec(p) for p in points]
    direction = vec(direction)
    k = len(points)
    dim = len(direction)
    A = []
    b = []
    for coord in range(dim):
        A.append([p[coord] for p in points] + [-direction[coord]])
        b.append(ZERO)
    A.append([ONE] * k + [ZERO])
    b.append(ONE)
    cobj = [ZERO] * k + [ONE]
    return lp_solve(cobj, A, b, free=(k,))


def lowest_point(points):
    """Minimal height tau with (tau, 0) in the hull of the lifted points.

    ``points`` is a sequence of ``(c, v)`` pairs.  Returns ``(tau, weights)``.
    """
    pts = [vec((c,)) + vec(v) for c, v in points]
    if not pts:
        raise NoPointAboveZero("empty point set")
    dim = len(pts[0])
    res = lowest_height(pts, (ONE,) + (ZERO,) * (dim - 1))
    if res.status == "infeasible":
        raise NoPointAboveZero("no point of the hull lies above the origin")
    if res.status != "optimal":
        raise NoPointAboveZero(f"lowest point LP is {res.status}")
    return res.optimum, res.witness[:-1]


@dataclass(frozen=True)
class FaceSupport:
    """Indices spanning the minimal face through a target point.

    ``weights`` is a convex combination hitting the target that is strictly
    positive exactly on ``indices``; it certifies the relative-interior claim.
    """

    indices: tuple
    weights: tuple


def _hull_constraints(points, target):
    k = len(points)
    dim = len(target)
    A = [[p[coord] for p in points] for coord in range(dim)]
    b = list(target)
    A.append([ONE] * k)
    b.append(ONE)
    return A, b


def minimal_face_support(points, target) -> FaceSupport:
    """Support of the minimal face of hull(points) containing ``target``.

    One LP per index maximizes that index's weight; the index is in the
    support iff the optimum is positive.
    """
    points = [vec(p) for p in points]
    target = vec(target)
    k = len(points)
    A, b = _hull_constraints(points, target)
    feas = lp_solve([ZERO] * k, A, b)
    if not feas.ok:
        raise TargetNotInHull("target is not in the convex hull")
    positive = [False] * k
    witnesses = [feas.witness]
    for i, x in enumerate(feas.witness):
        if x > 0:
            positive[i] = True
    for i in range(k):
        if positive[i]:
            continue
        cobj = [ZERO] * k
        cobj[i] = ONE
        res = lp_solve(cobj, A, b, maximize=True)
        if res.ok and res.optimum > 0:
            witnesses.append(res.witness)
            for j, x in enumerate(res.witness):
                if x > 0:
                    positive[j] = True
    S = tuple(i for i in range(k) if positive[i])
    nw = len(witnesses)
    weights = tuple(sum((w[i] for w in witnesses), ZERO) / nw for i in range(k))
    return FaceSupport(S, weights)


def max_min_weight(points, target=None):
    """Largest m such that target = sum r_i p_i, sum r_i = 1, every r_i >= m.

    Returns ``(m, weights)``, or ``(None, None)`` when target is not even in
    the affine hull.  ``m > 0`` certifies target is in the relative interior
    of the hull.
    """
    points = [vec(p) for p in points]
    k = len(points)
    if k == 0:
        return None, None
    dim = len(points[0])
    target = (ZERO,) * dim if target is None else vec(target)
    # variables: s_1..s_k >= 0, m free;  r_i = m + s_i
    A = []
    b = []
    for coord in range(dim):
        col = [p[coord] for p in points]
        A.append(col + [sum(col, ZERO)])
        b.append(target[coord])
    A.append([ONE] * k + [Fraction(k)])
    b.append(ONE)
    cobj = [ZERO] * k + [ONE]
    res = lp_solve(cobj, A, b, free=(k,), maximize=True)
    if not res.ok:
        return None, None
    m = res.witness[-1]
    return m, tuple(m + s for s in res.witness[:-1])


def is_complete(vectors, dim: int) -> bool:
    """Full-dimensional hull with the origin in its interior."""
    vectors = [vec(v) for v in vectors]
    if len(vectors) < dim + 1:
        return False
    if dim == 0:
        return True
    if rank([sub(v, vectors[0]) for v in vectors[1:]]) < dim:
        return False
    m, _ = max_min_weight(vectors)
    return m is not None and m > 0
