"""Single-pivot cluster-type substitutions and invariance of the critical point.

A mutation replaces x_k by (A + B) / x'_k where A = a x^alpha and
B = b x^beta are monomials not involving x_k, with positive series
coefficients; it is its own inverse.  Dropping B gives the monomial map
x_k = A / x'_k.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .errors import DimensionMismatch, NotLaurent, NotPositive
from .lift import solve_critical
from .ratgeom import dot, vec
from .series import INF, PuiseuxSeries, as_fraction, eval_character, reciprocal
from .tropical import LaurentPoly


@dataclass(frozen=True)
class Mutation:
    dim: int
    k: int
    a: PuiseuxSeries
    alpha: tuple
    b: PuiseuxSeries | None = None
    beta: tuple | None = None

    def __post_init__(self):
        if not 0 <= self.k < self.dim:
            raise ValueError(f"pivot index {self.k} outside 0..{self.dim - 1}")
        for coeff, exp in ((self.a, self.alpha), (self.b, self.beta)):
            if coeff is None:
                continue
            if len(exp) != self.dim:
                raise DimensionMismatch("exchange monomial has the wrong length")
            if exp[self.k] != 0:
                raise ValueError("exchange monomials must not involve the pivot variable")
            if not coeff.is_positive:
                raise NotPositive("exchange coefficients must be positive")
        if (self.b is None) != (self.beta is None):
            raise ValueError("give both or neither of b and beta")
        if self.b is not None and self.alpha == self.beta:
            raise ValueError("the two exchange monomials must differ")

    @classmethod
    def make(cls, dim, k, a, alpha, b=None, beta=None) -> "Mutation":
        def ser(x):
            if x is None or isinstance(x, PuiseuxSeries):
                return x
            return PuiseuxSeries.constant(float(x))

        return cls(dim, k, ser(a), vec(alpha), ser(b), None if beta is None else vec(beta))

    @property
    def monomial(self) -> bool:
        return self.b is None

    def binomial(self) -> dict:
        out = {self.alpha: self.a}
        if self.b is not None:
            out[self.beta] = self.b
        return out


Poly = dict  # exponent tuple -> PuiseuxSeries


def _poly_mul(P: Poly, Q: Poly) -> Poly:
    out: Poly = {}
    for u, p in P.items():
        for v, q in Q.items():
            e = tuple(x + y for x, y in zip(u, v))
            out[e] = out[e] + p * q if e in out else p * q
    return {e: c for e, c in out.items() if not c.is_zero}


def _poly_pow(P: Poly, n: int, dim: int) -> Poly:
    out: Poly = {(Fraction(0),) * dim: PuiseuxSeries.constant(1.0)}
    for _ in range(n):
        out = _poly_mul(out, P)
    return out


def _inverse(a: PuiseuxSeries, order):
    if len(a.terms) == 1 and a.trunc == INF:
        return reciprocal(a)
    if order is None:
        raise ValueError("a non-monomial exchange coefficient needs an explicit order")
    return reciprocal(a, order)


def divide_by_binomial(P: Poly, mu: Mutation, order=None) -> Poly:
    """Exact quotient P / (A + B); raises NotLaurent if the division leaves a remainder.

    Monomials of P are grouped into chains along gamma = beta - alpha; each
    chain is a polynomial in y = x^gamma and is divided by 1 + (b/a) y by
    synthetic division from its lowest degree.
    """
    gamma = tuple(y - x for x, y in zip(mu.alpha, mu.beta))
    j = next(i for i, g in enumerate(gamma) if g != 0)
    ratio = mu.b * _inverse(mu.a, order)
    inv_a = _inverse(mu.a, order)
    chains: dict = {}
    for u, c in P.items():
        s = u[j] / gamma[j]
        n = floor(s)
        frac = s - n
        base = tuple(x - s * g for x, g in zip(u, gamma))
        chains.setdefault((base, frac), {})[n] = c
    out: Poly = {}
    for (base, frac), coeffs in chains.items():
        lo, hi = min(coeffs), max(coeffs)
        q = {}
        prev = None
        for n in range(lo, hi + 1):
            p = coeffs.get(n, PuiseuxSeries.zero())
            cur = p if prev is None else p - ratio * prev
            if n == hi:
                if not cur.is_zero:
                    raise NotLaurent(
                        "substitution leaves the exchange binomial in the denominator",
                        factor=mu.binomial(),
                    )
            else:
                q[n] = cur
            prev = cur
        for n, c in q.items():
            if c.is_zero:
                continue
            s = n + frac
            u = tuple(x + s * g - a for x, g, a in zip(base, gamma, mu.alpha))
            val = c * inv_a
            out[u] = out[u] + val if u in out else val
    return {e: c for e, c in out.items() if not c.is_zero}


def mutate_pullback(W: LaurentPoly, mu: Mutation, order=None) -> LaurentPoly:
    """Substitute x_k = (A + B) / x'_k into W and certify the result is a
    positive Laurent polynomial."""
    if W.dim != mu.dim:
        raise DimensionMismatch("mutation and polynomial live on different tori")
    k = mu.k
    dim = W.dim
    if any(v[k].denominator != 1 for _, v in W.terms):
        raise NotLaurent("pivot exponents must be integers", factor=mu.binomial())
    if mu.monomial:
        out: Poly = {}
        inv_a = _inverse(mu.a, order)
        for g, v in W.terms:
            m = int(v[k])
            coeff = g * (mu.a ** m if m >= 0 else inv_a ** (-m))
            e = tuple((-v[i] if i == k else v[i]) + m * mu.alpha[i] for i in range(dim))
            out[e] = out[e] + coeff if e in out else coeff
    else:
        M = max(0, max(-int(v[k]) for _, v in W.terms))
        binom = mu.binomial()
        powers: dict[int, Poly] = {}
        out = {}
        for g, v in W.terms:
            m = int(v[k]) + M
            if m not in powers:
                powers[m] = _poly_pow(binom, m, dim)
            e0 = tuple(-v[i] if i == k else v[i] for i in range(dim))
            for u, c in powers[m].items():
                e = tuple(x + y for x, y in zip(e0, u))
                val = g * c
                out[e] = out[e] + val if e in out else val
        out = {e: c for e, c in out.items() if not c.is_zero}
        for _ in range(M):
            out = divide_by_binomial(out, mu, order)
    for e, c in out.items():
        if not c.is_positive:
            raise NotPositive(f"pulled-back coefficient of x^{tuple(map(str, e))} is not positive")
    return LaurentPoly(dim, tuple((out[e], e) for e in sorted(out)))


def trop_map(mu: Mutation, d_prime) -> tuple:
    """Tropicalization of the substitution: the valuation of the image point."""
    d_prime = vec(d_prime)
    first = mu.a.val + dot(mu.alpha, d_prime)
    if mu.monomial:
        low = first
    else:
        low = min(first, mu.b.val + dot(mu.beta, d_prime))
    return tuple(low - x if i == mu.k else x for i, x in enumerate(d_prime))


def push_forward(mu: Mutation, p, order) -> list:
    """Coordinates of the image of the point p' under the substitution, as series."""
    order = as_fraction(order)
    dim = mu.dim
    coords = []
    for j in range(dim):
        e = tuple(int(i == j) for i in range(dim))
        coords.append(eval_character(p, e, order))
    num = mu.a * eval_character(p, mu.alpha, order)
    if not mu.monomial:
        num = num + mu.b * eval_character(p, mu.beta, order)
    coords[mu.k] = num * reciprocal(coords[mu.k], order)
    return coords


def check_mutation_invariance(W: LaurentPoly, mu: Mutation, trunc_order=2, tol: float = 1e-8) -> dict:
    """Solve W and its pullback and compare the critical points through the map.

    ``series_max_deviation`` is the largest termwise difference between the
    pushed-forward and the direct series, relative to max(1, |coefficient|).
    ``log_scale`` is the largest coefficient of either log-coordinate series;
    deviations near 1e-16 * log_scale are rounding, not disagreement.
    """
    N = as_fraction(trunc_order)
    Wp = mutate_pullback(W, mu)
    R = solve_critical(W, N)
    Rp = solve_critical(Wp, N)
    image = trop_map(mu, Rp.d_crit)
    trop_ok = image == tuple(R.d_crit)
    order = min(N, R.order, Rp.order)
    pushed = push_forward(mu, Rp.point(), order)
    direct = [eval_character(R.point(), tuple(int(i == j) for i in range(W.dim)),
                             None if order == INF else order) for j in range(W.dim)]
    dev = 0.0
    for a, b, dj in zip(pushed, direct, R.d_crit):
        h = min(a.trunc, b.trunc, dj + order)
        ca = dict((e, c) for e, c in a.terms if e < h)
        cb = dict((e, c) for e, c in b.terms if e < h)
        for e in set(ca) | set(cb):
            x, y = ca.get(e, 0.0), cb.get(e, 0.0)
            # coefficients can grow geometrically with the order, so compare
            # each term relative to its own size (absolutely below 1)
            dev = max(dev, abs(x - y) / max(1.0, abs(x), abs(y)))
    # size of the log-coordinate series: exp() of it loses about this many
    # units of the float epsilon in relative accuracy
    log_scale = max([1.0] + [abs(c) for res in (R, Rp) for w in res.w_crit for _, c in w.terms])
    return {
        "pullback": Wp,
        "pullback_complete": Wp.complete,
        "d_crit": tuple(R.d_crit),
        "d_crit_pullback": tuple(Rp.d_crit),
        "trop_image": image,
        "trop_ok": trop_ok,
        "series_max_deviation": dev,
        "series_ok": dev <= tol,
        "log_scale": log_scale,
        "order": order,
        "scope": "single-pivot exchange and monomial maps only",
        "result": R,
        "result_pullback": Rp,
    }
