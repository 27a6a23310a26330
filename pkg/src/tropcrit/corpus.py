"""Seeded random instance generators used by the tests, the acceptance suite
and ``selfcheck``."""
from __future__ import annotations

import itertools
from math import comb
from fractions import Fraction

import numpy as np

from .mutation import Mutation
from .ratgeom import is_complete
from .series import PuiseuxSeries
from .tropical import LaurentPoly

DENOMS = (1, 2, 3)


def _rational(rng, lo: int, hi: int, denoms=DENOMS) -> Fraction:
    q = int(rng.choice(denoms))
    return Fraction(int(rng.integers(lo * q, hi * q + 1)), q)


def _coeff(rng) -> float:
    return float(np.round(rng.uniform(0.5, 2.0), 3))


def random_complete(rng, r: int, max_terms: int = 8, box: int = 2, c_range=(0, 2),
                    extra_terms: bool = False) -> LaurentPoly:
    """A random complete positive Laurent polynomial on an r-torus.

    Exponents are integer vectors in [-box, box]^r, valuations rationals with
    denominators in DENOMS.  With ``extra_terms`` some coefficients also carry
    a higher-order correction.
    """
    pool = [v for v in itertools.product(range(-box, box + 1), repeat=r) if any(v)]
    while True:
        n = min(int(rng.integers(r + 1, max_terms + 1)), len(pool))
        pick = rng.choice(len(pool), size=n, replace=False)
        vs = [pool[i] for i in pick]
        if not is_complete(vs, r):
            continue
        terms = []
        for v in vs:
            c = _rational(rng, *c_range)
            pairs = [(c, _coeff(rng))]
            if extra_terms and rng.random() < 0.4:
                pairs.append((c + _rational(rng, 1, 2, (1, 2)), _coeff(rng)))
            terms.append((PuiseuxSeries.from_terms(pairs), v))
        return LaurentPoly.from_terms(r, terms)


def corpus(seed: int = 0, count: int = 200, max_dim: int = 3, max_terms: int = 8) -> list:
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        r = 1 + k % max_dim
        out.append(random_complete(rng, r, max_terms=max_terms))
    return out


def random_noncomplete(rng, r: int, max_terms: int = 6) -> LaurentPoly:
    """A positive Laurent polynomial whose Newton polytope misses the interior condition.

    Alternates between exponents confined to a closed half-space and
    exponents confined to a proper sublattice direction.
    """
    while True:
        n = int(rng.integers(1, max_terms + 1))
        if rng.random() < 0.5 or r == 1:
            normal = rng.integers(-2, 3, size=r)
            if not normal.any():
                continue
            cand = [v for v in itertools.product(range(-2, 3), repeat=r)
                    if any(v) and int(np.dot(normal, v)) >= 0]
        else:
            direction = rng.integers(-2, 3, size=r)
            if not direction.any():
                continue
            cand = list({tuple(int(k) * int(x) for x in direction) for k in (-2, -1, 1, 2)})
        n = min(n, len(cand))
        pick = rng.choice(len(cand), size=n, replace=False)
        vs = [tuple(cand[i]) for i in pick]
        if is_complete(vs, r):
            continue
        return LaurentPoly.from_terms(
            r, [(PuiseuxSeries.monomial(_rational(rng, 0, 2), _coeff(rng)), v) for v in vs]
        )


def random_1d_polynomial(rng, max_exp: int = 3, max_terms: int = 5) -> LaurentPoly:
    """A complete 1-D instance whose coefficients are polynomials in t."""
    while True:
        n = int(rng.integers(2, max_terms + 1))
        exps = rng.choice([e for e in range(-max_exp, max_exp + 1) if e], size=n, replace=False)
        if exps.min() > 0 or exps.max() < 0:
            continue
        terms = []
        for e in exps:
            c = int(rng.integers(0, 3))
            pairs = [(c, _coeff(rng))]
            for extra in range(1, 3):
                if rng.random() < 0.5:
                    pairs.append((c + extra, _coeff(rng)))
            terms.append((PuiseuxSeries.from_terms(pairs), (int(e),)))
        return LaurentPoly.from_terms(1, terms)


def random_mutation_instance(rng):
    """A complete W on a 2-torus admitting the exchange x_0 -> (1 + t^b x_1^s) / x_0.

    W is assembled from terms with nonnegative pivot exponent plus terms
    (1 + t^b x_1^s)^j x_0^{-j} times monomials in x_1, so the pullback is a
    positive Laurent polynomial by construction.
    """
    while True:
        s = int(rng.choice([-1, 1]))
        b = _rational(rng, 0, 2, (1, 2))
        A = PuiseuxSeries.constant(1.0)
        B = PuiseuxSeries.monomial(b, 1.0)
        mu = Mutation.make(2, 0, A, (0, 0), B, (0, s))
        terms = []
        for _ in range(int(rng.integers(2, 4))):
            v = (int(rng.integers(0, 2)), int(rng.integers(-1, 2)))
            if any(v):
                terms.append((PuiseuxSeries.monomial(_rational(rng, 0, 2), _coeff(rng)), v))
        for _ in range(int(rng.integers(1, 3))):
            j = int(rng.integers(1, 3))
            m = int(rng.integers(-1, 2))
            g = PuiseuxSeries.monomial(_rational(rng, 0, 2), _coeff(rng))
            # (A + B)^j x_0^{-j} x_1^m
            for i in range(j + 1):
                coeff = g * PuiseuxSeries.monomial(b * i, float(comb(j, i)))
                terms.append((coeff, (-j, m + s * i)))
        W = LaurentPoly.from_terms(2, terms)
        if W.complete:
            return W, mu
