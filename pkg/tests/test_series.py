import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from tropcrit.errors import CoeffOfZero, NonPositiveValuation, NotUnitLeading
from tropcrit.series import (
    INF,
    PuiseuxSeries,
    TorusPoint,
    add,
    eval_character,
    exp_series,
    log_series,
    mul,
    reciprocal,
)

S = PuiseuxSeries.from_terms
F = Fraction


def test_add_cancels_exactly():
    a = S([(0, 1.0), (1, 1.0)], 2)
    b = S([(0, -1.0), (2, 1.0)], 3)
    assert add(a, b) == S([(1, 1.0)], 2)


def test_add_zero_identity():
    a = S([("1/2", 3.0), (1, 1.0)], 4)
    assert PuiseuxSeries.zero() + a == a


def test_add_merges_fractional_exponents():
    a = S([("1/2", 1.0)], 1)
    b = S([("1/3", 1.0)], 1)
    assert add(a, b).terms == ((F(1, 3), 1.0), (F(1, 2), 1.0))
    assert add(a, b).trunc == 1


def test_mul_examples():
    h = PuiseuxSeries.monomial("1/2")
    assert h * h == PuiseuxSeries.monomial(1)
    assert S([(0, 1.0), (1, 1.0)]) * S([(0, 1.0), (1, -1.0)]) == S([(0, 1.0), (2, -1.0)])
    p = mul(S([(0, 1.0), ("1/3", 1.0)], 1), S([(0, 1.0), ("1/2", 1.0)], 1))
    assert p.terms == ((0, 1.0), (F(1, 3), 1.0), (F(1, 2), 1.0), (F(5, 6), 1.0))
    assert p.trunc == 1


def test_mul_truncation_horizon():
    a = S([("1/2", 1.0)], 2)
    b = S([(1, 1.0)], 3)
    # min(2 + 1, 3 + 1/2)
    assert mul(a, b).trunc == 3


def test_val_and_leading_coeff():
    a = S([("1/2", 3.0), (1, 1.0)])
    assert a.val == F(1, 2) and a.leading_coeff() == 3.0
    assert PuiseuxSeries.zero().val == INF
    assert S([(0, 2.0), (1, 1.0)]).val == 0
    assert S([(0, -2.0), (1, 1.0)]).leading_coeff() == -2.0
    assert PuiseuxSeries.monomial(-1, 5.0).leading_coeff() == 5.0
    with pytest.raises(CoeffOfZero):
        PuiseuxSeries.zero().leading_coeff()


def test_invariants_enforced():
    with pytest.raises(ValueError):
        PuiseuxSeries(((F(1), 1.0), (F(0), 1.0)), INF)
    with pytest.raises(ValueError):
        PuiseuxSeries(((F(2), 1.0),), F(2))
    with pytest.raises((TypeError, ValueError)):
        S([(0.5, 1.0)])  # float exponents are rejected; use "1/2"


def test_exp_examples():
    assert exp_series(PuiseuxSeries.zero()) == PuiseuxSeries.constant(1.0)
    e = exp_series(S([(1, 1.0)], 3))
    assert e.allclose(S([(0, 1.0), (1, 1.0), (2, 0.5)], 3), tol=1e-15)
    assert e.trunc == 3
    with pytest.raises(NonPositiveValuation):
        exp_series(S([(0, 1.0)]))


def test_log_of_exp():
    a = S([(1, -1.0), (2, 2.0)], 4)
    assert log_series(exp_series(a)).allclose(a, tol=1e-12)
    with pytest.raises(NotUnitLeading):
        log_series(S([(0, 2.0), (1, 1.0)]))


def test_reciprocal_geometric():
    a = S([(0, 1.0), (1, 1.0)], 4)
    inv = reciprocal(a)
    assert inv.allclose(S([(0, 1.0), (1, -1.0), (2, 1.0), (3, -1.0)], 4), tol=1e-14)
    assert PuiseuxSeries.monomial("1/2", 2.0) / PuiseuxSeries.monomial("1/2", 2.0) == PuiseuxSeries.constant(1.0)


def test_eval_character_examples():
    p = TorusPoint.make([0.0], ["1/2"])
    assert eval_character(p, (2,)) == PuiseuxSeries.monomial(1)
    p = TorusPoint.make([math.log(2)], [0])
    assert eval_character(p, (1,)).allclose(PuiseuxSeries.constant(2.0), tol=1e-15)
    p = TorusPoint.make([0.0], [0], [S([(1, -1.0)], 3)])
    got = eval_character(p, (3,))
    assert got.allclose(S([(0, 1.0), (1, -3.0), (2, 4.5)], 3), tol=1e-12)


def test_literal_round_trip():
    a = S([("1/2", 3.0), (1, 1.0)], 2)
    lit = a.to_literal()
    assert lit == {"terms": [["1/2", 3.0], ["1", 1.0]], "trunc": "2"}
    assert PuiseuxSeries.from_literal(lit) == a
    assert PuiseuxSeries.from_literal({"terms": [["1/2", 3.0], ["1", 1.0]], "trunc": "2"}) == a


# -- properties -----------------------------------------------------------------
exps = st.fractions(min_value=0, max_value=3, max_denominator=4)
pos_exps = st.fractions(min_value=F(1, 4), max_value=3, max_denominator=4)
coeffs = st.floats(min_value=0.1, max_value=5.0)


@st.composite
def series(draw, exp=exps, signed=True, trunc=True):
    pairs = draw(st.lists(st.tuples(exp, coeffs), min_size=1, max_size=4))
    if signed:
        pairs = [(e, c if draw(st.booleans()) else -c) for e, c in pairs]
    h = draw(st.sampled_from([INF, F(4), F(7, 2)])) if trunc else INF
    out = S(pairs, h)
    assume(not out.is_zero)
    return out


@st.composite
def positive_series(draw):
    s = draw(series(signed=True))
    e0, c0 = s.terms[0]
    return S([(e0, abs(c0))] + list(s.terms[1:]), s.trunc)


@given(series(), series())
def test_valuation_of_product(a, b):
    assert (a * b).val == a.val + b.val


@given(series(), series())
def test_valuation_of_sum(a, b):
    s = a + b
    assert s.val >= min(a.val, b.val) or s.is_zero
    if a.val != b.val:
        assert s.val == min(a.val, b.val)


@given(series(), series())
def test_leading_coeff_multiplicative(a, b):
    assert math.isclose((a * b).leading_coeff(), a.leading_coeff() * b.leading_coeff(), rel_tol=1e-12)


@given(positive_series(), positive_series())
def test_positivity_closed(a, b):
    assert (a + b).is_positive
    assert (a * b).is_positive
    assert reciprocal(a, 3).is_positive


@given(series(exp=pos_exps))
def test_exp_log_round_trip(a):
    a = a.truncate(min(a.trunc, 3))
    assert log_series(exp_series(a)).allclose(a, tol=1e-8)


@given(
    st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=3), min_size=2, max_size=2),
    st.lists(st.floats(min_value=-1, max_value=1), min_size=2, max_size=2),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2),
)
def test_character_homomorphism(d, u, v1, v2):
    w = (S([(1, 0.5), ("3/2", -1.0)], 3), S([("1/2", 1.0)], 3))
    p = TorusPoint.make(u, d, w)
    lhs = eval_character(p, tuple(a + b for a, b in zip(v1, v2)))
    rhs = eval_character(p, v1) * eval_character(p, v2)
    assert lhs.allclose(rhs, tol=1e-8 * max(1.0, max((abs(c) for _, c in rhs.terms), default=1.0)))
