from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tropcrit.corpus import random_mutation_instance
from tropcrit.errors import NotLaurent, NotPositive
from tropcrit.mutation import (
    Mutation,
    check_mutation_invariance,
    divide_by_binomial,
    mutate_pullback,
    trop_map,
)
from tropcrit.series import PuiseuxSeries
from tropcrit.tropical import LaurentPoly

F = Fraction
one = PuiseuxSeries.constant(1.0)
t = PuiseuxSeries.monomial
poly = LaurentPoly.from_monomials


def _sorted(W):
    return sorted(W.terms, key=lambda x: x[1])


def test_exchange_pullback_by_hand():
    # x0 + t/x0 + x1 + 1/x1 with x0 = (1 + x1)/x0'
    W = poly(2, [(0, 1.0, (1, 0)), (1, 1.0, (-1, 0)), (0, 1.0, (0, 1)), (0, 1.0, (0, -1))])
    mu = Mutation.make(2, 0, 1.0, (0, 0), 1.0, (0, 1))
    with pytest.raises(NotLaurent):
        mutate_pullback(W, mu)
    # adding t x1/x0 makes t(1 + x1)/x0 divisible
    W = poly(2, [(0, 1.0, (1, 0)), (1, 1.0, (-1, 0)), (1, 1.0, (-1, 1)), (0, 1.0, (0, 1)),
                 (0, 1.0, (0, -1))])
    Wp = mutate_pullback(W, mu)
    want = poly(2, [(0, 1.0, (-1, 0)), (0, 1.0, (-1, 1)), (1, 1.0, (1, 0)), (0, 1.0, (0, 1)),
                    (0, 1.0, (0, -1))])
    assert _sorted(Wp) == _sorted(want)


def test_monomial_map():
    W = poly(1, [(0, 2.0, (1,)), (1, 1.0, (-1,))])
    mu = Mutation.make(1, 0, t(1, 1.0), (0,))
    Wp = mutate_pullback(W, mu)
    # 2 t / x' + t x' / t
    assert _sorted(Wp) == _sorted(poly(1, [(1, 2.0, (-1,)), (0, 1.0, (1,))]))


def test_divide_by_binomial_rejects_remainder():
    mu = Mutation.make(2, 0, 1.0, (0, 0), 1.0, (0, 1))
    P = {(F(0), F(0)): one, (F(0), F(2)): one}  # 1 + y^2 is not divisible by 1 + y
    with pytest.raises(NotLaurent):
        divide_by_binomial(P, mu)
    # (1 + y)^2 / (1 + y) = 1 + y
    Q = divide_by_binomial({(F(0), F(0)): one, (F(0), F(1)): one * 2.0, (F(0), F(2)): one}, mu)
    assert sorted(Q) == [(F(0), F(0)), (F(0), F(1))]
    assert all(c.allclose(one, tol=1e-15) for c in Q.values())


def test_mutation_validation():
    with pytest.raises(ValueError):
        Mutation.make(2, 0, 1.0, (1, 0))
    with pytest.raises(NotPositive):
        Mutation.make(2, 0, -1.0, (0, 0))
    with pytest.raises(ValueError):
        Mutation.make(2, 0, 1.0, (0, 1), 1.0, (0, 1))


def test_trop_map_is_min_plus():
    mu = Mutation.make(2, 0, 1.0, (0, 0), t(F(1, 2), 1.0), (0, 1))
    assert trop_map(mu, (F(1, 3), F(-1))) == (F(-1, 2) - F(1, 3), F(-1))
    assert trop_map(mu, (0, F(1))) == (0, 1)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_involution(seed):
    W, mu = random_mutation_instance(np.random.default_rng(seed))
    back = mutate_pullback(mutate_pullback(W, mu), mu)
    a, b = dict((v, g) for g, v in W.terms), dict((v, g) for g, v in back.terms)
    assert set(a) == set(b)
    for v in a:
        assert a[v].allclose(b[v], tol=1e-12)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_tropical_involution(seed):
    rng = np.random.default_rng(seed)
    _, mu = random_mutation_instance(rng)
    d = tuple(F(int(rng.integers(-6, 7)), int(rng.integers(1, 4))) for _ in range(2))
    assert trop_map(mu, trop_map(mu, d)) == d


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_invariance(seed):
    W, mu = random_mutation_instance(np.random.default_rng(seed))
    out = check_mutation_invariance(W, mu, trunc_order=2)
    assert out["pullback_complete"]
    assert out["trop_ok"]
    # the lift stops at gradient coefficients below 1e-10 of the products summed,
    # and a badly scaled log-coordinate series loses accuracy in exp()
    assert out["series_max_deviation"] <= max(1e-6, 1e-13 * out["log_scale"])
