from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import grid_max_exact
from tropcrit.corpus import random_complete
from tropcrit.errors import NotComplete, NotPositive
from tropcrit.newton import canonical_point
from tropcrit.series import PuiseuxSeries
from tropcrit.tropical import (
    LaurentPoly,
    check_coeff_conditions,
    check_tropical_critical,
    level_data,
    polytope_membership,
    trop_eval,
    trop_grid_max,
    trop_max,
)

F = Fraction
poly = LaurentPoly.from_monomials

HALF = poly(1, [(0, 1.0, (1,)), (1, 1.0, (-1,))])  # x + t/x
TRI = poly(2, [(1, 1.0, (1, 0)), (1, 1.0, (0, 1)), (1, 1.0, (-1, -1))])  # tx + ty + t/(xy)
TWO_STAGE = poly(2, [(0, 1.0, (1, 0)), (1, 1.0, (-1, 0)), (1, 1.0, (0, 1)), (1, 1.0, (0, -1))])
CUBIC = poly(1, [(0, 1.0, (1,)), (0, 1.0, (-1,)), (1, 1.0, (2,))])  # x + 1/x + t x^2


def simplex_potential(r):
    items = [(0, 1.0, tuple(int(i == j) for j in range(r))) for i in range(r)]
    items.append((1, 1.0, (-1,) * r))
    return poly(r, items)


def test_trop_eval_examples():
    assert trop_eval(HALF, (F(1, 2),)) == F(1, 2)
    assert trop_eval(HALF, (0,)) == 0
    assert trop_eval(TRI, (0, 0)) == 1


def test_trop_max_examples():
    assert trop_max(HALF) == F(1, 2)
    assert trop_max(TRI) == 1
    assert trop_max(poly(1, [(0, 1.0, (1,)), (0, 1.0, (-1,))])) == 0
    with pytest.raises(NotComplete):
        trop_max(poly(1, [(0, 1.0, (1,)), (0, 1.0, (2,))]))


def test_laurent_poly_validation():
    with pytest.raises(NotPositive):
        LaurentPoly(1, ((PuiseuxSeries.constant(-1.0), (F(1),)),))
    W = LaurentPoly.from_terms(1, [(1.0, (1,)), (2.0, (1,)), (1.0, (-1,))])
    assert len(W) == 2 and W.terms[0][0] == PuiseuxSeries.constant(3.0)


def test_polytope_membership():
    for r in (1, 2, 3):
        W = simplex_potential(r)
        assert polytope_membership(W, (F(1, r + 1),) * r)
        assert not polytope_membership(W, (-1,) + (0,) * (r - 1))
        assert polytope_membership(W, (0,) * r)  # a vertex: boundary counts


def test_level_data_examples():
    ld = level_data(TWO_STAGE, (F(1, 2), 0))
    assert ld.deltas == (0, 0, F(1, 2), F(1, 2))
    assert ld.levels == (0, F(1, 2))
    below = ld.below[F(1, 2)]
    assert below.dim == 1 and below.contains((1, 0))
    assert level_data(CUBIC, (0,)).deltas == (0, 0, 1)
    W = random_complete(np.random.default_rng(3), 2)
    assert 0 in level_data(W, canonical_point(W).d_crit).deltas


def test_tropical_critical_examples():
    assert check_tropical_critical(HALF, (F(1, 2),)).passed
    assert not check_tropical_critical(HALF, (0,)).passed
    cert = check_tropical_critical(TWO_STAGE, (F(1, 2), 0))
    assert cert.passed and len(cert.levels) == 2


def test_coeff_condition_examples():
    assert check_coeff_conditions(HALF, (F(1, 2),), (0.0,))
    assert not check_coeff_conditions(HALF, (F(1, 2),), (1.0,))
    assert check_coeff_conditions(TRI, (0, 0), (0.0, 0.0))


def test_trop_grid_matches_exact_grid():
    W = TWO_STAGE
    g = trop_grid_max(W, -2, 2, 21, bound=trop_max(W))
    best, arg, _ = grid_max_exact(list(zip(W.vals, W.vectors)), -2, 2, 21)
    assert g.best == best and not g.exceeds


# -- properties -----------------------------------------------------------------
seeds = st.integers(0, 10_000)
rats = st.fractions(min_value=-2, max_value=2, max_denominator=4)


@given(seeds, st.integers(1, 3), st.lists(rats, min_size=6, max_size=6), st.fractions(0, 1, max_denominator=5))
def test_trop_eval_concave(seed, r, coords, lam):
    W = random_complete(np.random.default_rng(seed), r, max_terms=6)
    d1, d2 = tuple(coords[:r]), tuple(coords[3:3 + r])
    mid = tuple(lam * a + (1 - lam) * b for a, b in zip(d1, d2))
    assert trop_eval(W, mid) >= lam * trop_eval(W, d1) + (1 - lam) * trop_eval(W, d2)


@given(seeds, st.integers(1, 3), st.lists(rats, min_size=3, max_size=3))
def test_critical_point_is_unique(seed, r, d):
    W = random_complete(np.random.default_rng(seed), r, max_terms=6)
    d_crit = canonical_point(W).d_crit
    d = tuple(d[:r])
    if d != d_crit:
        assert not check_tropical_critical(W, d).passed
    assert check_tropical_critical(W, d_crit).passed


@settings(max_examples=25)
@given(seeds, st.integers(1, 2))
def test_grid_oracle(seed, r):
    W = random_complete(np.random.default_rng(seed), r, max_terms=5)
    pts = [(c, v) for c, v in zip(W.vals, W.vectors)]
    tau = trop_max(W)
    d_crit = canonical_point(W).d_crit
    lo, hi, n = -4, 4, (161 if r == 1 else 33)
    best, arg, step = grid_max_exact(pts, lo, hi, n)
    assert best <= tau
    if all(lo <= x <= hi for x in d_crit):
        # the concave function drops off linearly, so the grid maximizer
        # sits within a few steps of the unique maximizer
        slope = max(sum(abs(x) for x in v) for v in W.vectors)
        assert tau - best <= slope * step * r
        if r == 1:
            # a unimodal function peaks on the grid next to its maximizer
            assert abs(arg[0] - d_crit[0]) <= step
