"""Truncated generalized Puiseux series with rational exponents.

A series is stored as a strictly increasing tuple of ``(exponent, coefficient)``
pairs together with a truncation horizon ``trunc``: every term with exponent
below ``trunc`` is known exactly (up to floating point in the coefficient),
nothing at or beyond it is known.  ``trunc = inf`` marks an exact, finite
series such as a monomial.

Exponents are :class:`fractions.Fraction`, coefficients are Python floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CoeffOfZero,
    DimensionMismatch,
    NonPositiveValuation,
    NotPositive,
    NotUnitLeading,
)

INF = math.inf

# Coefficients produced by floating cancellation below this size (relative to
# the operands, floored at 1) are dropped.
CLEANUP = 1e-12


def as_fraction(x) -> Fraction:
    """Parse an exact rational from an int, Fraction or ``"p/q"`` string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # only accept floats that are exactly integral; anything else is
        # almost certainly a lossy input
        if x.is_integer():
            return Fraction(int(x))
        raise TypeError(f"refusing inexact float exponent {x!r}; use a 'p/q' string")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _norm_trunc(t):
    if t == INF:
        return INF
    return as_fraction(t)


def _fmt_rat(x) -> str:
    return str(x) if x != INF else "inf"


@dataclass(frozen=True)
class PuiseuxSeries:
    terms: tuple = ()
    trunc: Fraction | float = INF

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if not isinstance(e, Fraction):
                raise TypeError("exponents must be Fractions")
            if c == 0:
                raise ValueError("zero coefficient stored in series")
            if prev is not None and not e > prev:
                raise ValueError("exponents must be strictly increasing")
            if not e < self.trunc:
                raise ValueError(f"term t^{e} lies at or beyond trunc {self.trunc}")
            prev = e

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_terms(cls, pairs: Iterable, trunc=INF, cleanup: float = CLEANUP) -> "PuiseuxSeries":
        """Build a series from unsorted, possibly repeated ``(exp, coeff)`` pairs."""
        trunc = _norm_trunc(trunc)
        acc: dict[Fraction, float] = {}
        scale: dict[Fraction, float] = {}
        for e, c in pairs:
            e = as_fraction(e)
            if not e < trunc:
                continue
            c = float(c)
            acc[e] = acc.get(e, 0.0) + c
            scale[e] = max(scale.get(e, 0.0), abs(c))
        kept = tuple(
            (e, acc[e]) for e in sorted(acc) if abs(acc[e]) > cleanup * scale[e]
        )
        return cls(kept, trunc)

    @classmethod
    def zero(cls, trunc=INF) -> "PuiseuxSeries":
        return cls((), _norm_trunc(trunc))

    @classmethod
    def monomial(cls, exp, coeff: float = 1.0, trunc=INF) -> "PuiseuxSeries":
        return cls.from_terms([(exp, coeff)], trunc, cleanup=0.0)

    @classmethod
    def constant(cls, c: float, trunc=INF) -> "PuiseuxSeries":
        return cls.monomial(0, c, trunc)

    # -- basic queries ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def val(self):
        """Valuation: exponent of the lowest term, ``inf`` for the zero series."""
        return self.terms[0][0] if self.terms else INF

    def lower_bound(self):
        """Best known lower bound on the true valuation."""
        return self.terms[0][0] if self.terms else self.trunc

    def leading_coeff(self) -> float:
        if not self.terms:
            raise CoeffOfZero("leading coefficient of the zero series")
        return self.terms[0][1]

    @property
    def is_positive(self) -> bool:
        return bool(self.terms) and self.terms[0][1] > 0

    def coeff_at(self, e) -> float:
        e = as_fraction(e)
        if not e < self.trunc:
            raise ValueError(f"coefficient of t^{e} lies beyond trunc {self.trunc}")
        for ex, c in self.terms:
            if ex == e:
                return c
        return 0.0

    def __len__(self):
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------
    def truncate(self, horizon) -> "PuiseuxSeries":
        h = min(self.trunc, _norm_trunc(horizon))
        return PuiseuxSeries(tuple((e, c) for e, c in self.terms if e < h), h)

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by ``t**e``."""
        e = as_fraction(e)
        return PuiseuxSeries(tuple((x + e, c) for x, c in self.terms), self.trunc + e)

    def scale(self, k: float) -> "PuiseuxSeries":
        k = float(k)
        if k == 0.0:
            return PuiseuxSeries((), self.trunc)
        return PuiseuxSeries(tuple((e, c * k) for e, c in self.terms), self.trunc)

    def __neg__(self):
        return self.scale(-1.0)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = PuiseuxSeries.constant(other) if other else PuiseuxSeries.zero()
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = PuiseuxSeries.constant(other) if other else PuiseuxSeries.zero()
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return reciprocal(self) ** (-n)
        out = PuiseuxSeries.constant(1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(1.0 / other)
        return self * reciprocal(other)

    def allclose(self, other: "PuiseuxSeries", tol: float = 1e-9, horizon=None) -> bool:
        """Termwise comparison below the common (or given) horizon."""
        h = min(self.trunc, other.trunc)
        if horizon is not None:
            h = min(h, _norm_trunc(horizon))
        a = dict((e, c) for e, c in self.terms if e < h)
        b = dict((e, c) for e, c in other.terms if e < h)
        return all(abs(a.get(e, 0.0) - b.get(e, 0.0)) <= tol for e in set(a) | set(b))

    # -- serialization ------------------------------------------------------
    def to_literal(self) -> dict:
        out = {"terms": [[str(e), float(c)] for e, c in self.terms]}
        if self.trunc != INF:
            out["trunc"] = str(self.trunc)
        return out

    @classmethod
    def from_literal(cls, obj) -> "PuiseuxSeries":
        if isinstance(obj, (int, float)) and not isinstance(obj, bool):
            return cls.constant(float(obj)) if obj else cls.zero()
        if not isinstance(obj, dict) or "terms" not in obj:
            raise ValueError(f"not a series literal: {obj!r}")
        pairs = []
        for item in obj["terms"]:
            if len(item) != 2:
                raise ValueError(f"series term must be [exponent, coefficient]: {item!r}")
            pairs.append((as_fraction(item[0]), float(item[1])))
        trunc = obj.get("trunc", INF)
        if isinstance(trunc, str) and trunc.strip().lower() in ("inf", "infinity"):
            trunc = INF
        return cls.from_terms(pairs, trunc, cleanup=0.0)

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e, c in self.terms:
                if e == 0:
                    parts.append(f"{c:.6g}")
                else:
                    parts.append(f"{c:.6g}*t^({e})")
            body = " + ".join(parts)
        if self.trunc != INF:
            body += f" + O(t^({self.trunc}))"
        return body


def add(a: PuiseuxSeries, b: PuiseuxSeries, cleanup: float = CLEANUP) -> PuiseuxSeries:
    """Termwise sum; the horizon is the tighter of the two."""
    return PuiseuxSeries.from_terms(a.terms + b.terms, min(a.trunc, b.trunc), cleanup)


def mul(a: PuiseuxSeries, b: PuiseuxSeries, cleanup: float = CLEANUP) -> PuiseuxSeries:
    """Product; known below ``min(a.trunc + val b, b.trunc + val a)``."""
    h = min(a.trunc + b.lower_bound(), b.trunc + a.lower_bound())
    acc: dict[Fraction, float] = {}
    scale: dict[Fraction, float] = {}
    for e1, c1 in a.terms:
        for e2, c2 in b.terms:
            e = e1 + e2
            if not e < h:
                break
            p = c1 * c2
            acc[e] = acc.get(e, 0.0) + p
            scale[e] = max(scale.get(e, 0.0), abs(p))
    terms = tuple((e, acc[e]) for e in sorted(acc) if abs(acc[e]) > cleanup * scale[e])
    return PuiseuxSeries(terms, h)


def val(a: PuiseuxSeries):
    return a.val


def leading_coeff(a: PuiseuxSeries) -> float:
    return a.leading_coeff()


def _horizon(a: PuiseuxSeries, order):
    h = a.trunc if order is None else min(a.trunc, _norm_trunc(order))
    if h == INF:
        raise ValueError("an explicit finite order is needed for an exact non-polynomial result")
    return h


def exp_series(a: PuiseuxSeries, order=None) -> PuiseuxSeries:
    """exp(a) for Val(a) > 0, known below ``min(a.trunc, order)``.

    All exponents of exp(a) lie on the lattice (1/D)Z spanned by the exponents
    of a, so the series is built from the recurrence k f_k = sum_j j a_j f_{k-j}
    on lattice indices.
    """
    if a.terms and not a.val > 0:
        raise NonPositiveValuation(f"exp needs positive valuation, got {a.val}")
    if not a.terms:
        h = a.trunc if order is None else min(a.trunc, _norm_trunc(order))
        return PuiseuxSeries.constant(1.0, h)
    h = _horizon(a, order)
    terms = [(e, c) for e, c in a.terms if e < h]
    D = math.lcm(h.denominator, *(e.denominator for e, _ in terms))
    K = int(h * D) + (0 if (h * D).denominator == 1 else 1)
    sparse = [(int(e * D), c) for e, c in terms]
    f = [0.0] * K
    f[0] = 1.0
    for k in range(1, K):
        acc = 0.0
        for j, c in sparse:
            if j > k:
                break
            acc += j * c * f[k - j]
        f[k] = acc / k
    pairs = [(Fraction(k, D), f[k]) for k in range(K) if f[k] != 0.0]
    return PuiseuxSeries.from_terms(pairs, h, cleanup=0.0)


def exp_noise_scale(a: PuiseuxSeries, f: PuiseuxSeries) -> PuiseuxSeries:
    """Size of the terms summed for each coefficient of f = exp(a).

    Coefficient k of f is (1/k) sum_j j a_j f_{k-j}; this returns
    |f_k| + (1/k) sum_j j |a_j| |f_{k-j}|, the scale of its rounding error.
    """
    if not a.terms:
        return PuiseuxSeries(tuple((e, abs(c)) for e, c in f.terms), f.trunc)
    D = math.lcm(*(e.denominator for e, _ in a.terms), *(e.denominator for e, _ in f.terms))
    fa = {int(e * D): abs(c) for e, c in f.terms}
    sparse = [(int(e * D), abs(c)) for e, c in a.terms if e < f.trunc]
    out = dict(fa)
    K = max(fa, default=0) + 1
    h = f.trunc * D if f.trunc != INF else INF
    for k in range(1, int(min(h, K + max(j for j, _ in sparse))) if sparse else 1):
        acc = sum(j * c * fa.get(k - j, 0.0) for j, c in sparse if j <= k)
        if acc:
            out[k] = out.get(k, 0.0) + acc / k
    pairs = [(Fraction(k, D), c) for k, c in sorted(out.items()) if Fraction(k, D) < f.trunc]
    return PuiseuxSeries(tuple(pairs), f.trunc)


def log_series(a: PuiseuxSeries, order=None, tol: float = 1e-12) -> PuiseuxSeries:
    """log(a) for a in 1 + m (leading term exactly 1 at exponent 0)."""
    if not a.terms or a.terms[0][0] != 0 or abs(a.terms[0][1] - 1.0) > tol:
        raise NotUnitLeading("log needs a series of the form 1 + (positive valuation)")
    h = _horizon(a, order)
    r = PuiseuxSeries(a.terms[1:], a.trunc).truncate(h)
    if not r.terms:
        return PuiseuxSeries.zero(h)
    out = PuiseuxSeries.zero(h)
    power = r
    k = 1
    while power.terms and power.val < h:
        out = add(out, power.scale((-1.0) ** (k + 1) / k))
        power = mul(power, r).truncate(h)
        k += 1
    return out.truncate(h)


def reciprocal(a: PuiseuxSeries, order=None) -> PuiseuxSeries:
    """1/a for a series with positive leading coefficient.

    ``order`` bounds the relative precision (beyond the leading exponent)
    when ``a`` is exact.
    """
    if not a.terms:
        raise CoeffOfZero("reciprocal of the zero series")
    v, c = a.terms[0]
    if c <= 0:
        raise NotPositive("reciprocal is only provided for positive-leading series")
    rel = a.trunc - v
    if order is not None:
        rel = min(rel, _norm_trunc(order))
    # a = c t^v (1 + r)
    r = PuiseuxSeries(tuple((e - v, x / c) for e, x in a.terms[1:]), a.trunc - v)
    if not r.terms:
        return PuiseuxSeries.monomial(-v, 1.0 / c, trunc=rel - v if rel != INF else INF)
    if rel == INF:
        raise ValueError("reciprocal of a non-monomial exact series needs an order")
    r = r.truncate(rel)
    out = PuiseuxSeries.constant(1.0, rel)
    power = PuiseuxSeries.constant(1.0, rel)
    neg_r = r.scale(-1.0)
    while True:
        power = mul(power, neg_r).truncate(rel)
        if not power.terms:
            break
        out = add(out, power)
    return out.shift(-v).scale(1.0 / c)


@dataclass(frozen=True)
class TorusPoint:
    """A point ``e^u t^d exp(w)`` of the torus over positive Puiseux series.

    ``u`` is a real vector, ``d`` a rational vector and ``w`` a vector of
    series of strictly positive valuation.
    """

    u: tuple
    d: tuple
    w: tuple

    def __post_init__(self):
        if not (len(self.u) == len(self.d) == len(self.w)):
            raise DimensionMismatch("u, d and w must have the same length")
        for s in self.w:
            if s.terms and not s.val > 0:
                raise NonPositiveValuation("every component of w must have positive valuation")

    @classmethod
    def make(cls, u: Sequence[float], d: Sequence, w: Sequence[PuiseuxSeries] | None = None):
        r = len(d)
        if w is None:
            w = [PuiseuxSeries.zero() for _ in range(r)]
        return cls(tuple(float(x) for x in u), tuple(as_fraction(x) for x in d), tuple(w))

    @property
    def dim(self) -> int:
        return len(self.d)


def eval_character(p: TorusPoint, v: Sequence, order=None) -> PuiseuxSeries:
    """Evaluate the character x^v at p as a truncated series.

    The relative precision of the exponential factor is the horizon of the
    involved components of w (or ``order`` if smaller).
    """
    if len(v) != p.dim:
        raise DimensionMismatch(f"character of length {len(v)} on a {p.dim}-torus")
    v = [as_fraction(x) for x in v]
    s = sum(float(vi) * ui for vi, ui in zip(v, p.u))
    e = sum((vi * di for vi, di in zip(v, p.d)), Fraction(0))
    arg = PuiseuxSeries.zero()
    for vi, wi in zip(v, p.w):
        if vi != 0:
            arg = add(arg, wi.scale(float(vi)))
    if arg.is_zero and order is None:
        ex = PuiseuxSeries.constant(1.0, arg.trunc)
    else:
        ex = exp_series(arg, order)
    return ex.scale(math.exp(s)).shift(e)


def coordinate(p: TorusPoint, j: int, order=None) -> PuiseuxSeries:
    """The j-th coordinate of p as a series."""
    v = [0] * p.dim
    v[j] = 1
    return eval_character(p, v, order)
