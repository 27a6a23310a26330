from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tropcrit.errors import EmptyPolytope, NonPrimitiveRay, NotComplete, Unbounded
from tropcrit.newton import canonical_point
from tropcrit.toric import DelzantInstance, ToricInstance, delzant_analyze, potential, toric_analyze

F = Fraction

ANTICANONICAL = {
    "P1": [(1,), (-1,)],
    "P2": [(1, 0), (0, 1), (-1, -1)],
    "P1xP1": [(1, 0), (-1, 0), (0, 1), (0, -1)],
    "Bl_pt P2": [(1, 0), (0, 1), (-1, -1), (1, 1)],
}


@pytest.mark.parametrize("r", range(1, 7))
def test_simplex_center(r):
    out = delzant_analyze(DelzantInstance.simplex(r))
    assert out["d_crit"] == (F(1, r + 1),) * r
    assert out["interior"] is True
    assert all(m == F(1, r + 1) for m in out["facet_margins"])
    assert out["nondegenerate"]


@pytest.mark.parametrize("name", sorted(ANTICANONICAL))
def test_anticanonical_is_balanced_at_origin(name):
    rays = ANTICANONICAL[name]
    out = toric_analyze(ToricInstance.make(rays, [1] * len(rays)))
    assert all(x == 0 for x in out["d_crit"])
    assert out["integrally_balanced"] is True
    assert out["distinguished_divisor"] == (1,) * len(rays)


def test_unbalanced_divisor_shifts_to_center():
    out = toric_analyze(ToricInstance.make([(1,), (-1,)], [0, 1]))
    assert out["d_crit"] == (F(1, 2),)
    assert out["integrally_balanced"] is False
    assert out["distinguished_divisor"] is None
    assert out["shifted_divisor"] == (F(1, 2), F(1, 2))


def test_rational_divisor_has_no_balance_verdict():
    out = toric_analyze(ToricInstance.make([(1,), (-1,)], [F(1, 3), 0]))
    assert out["integrally_balanced"] is None


def test_box_center():
    out = delzant_analyze(DelzantInstance.box([2, F(1, 2)]))
    assert out["d_crit"] == (1, F(1, 4))
    assert out["interior"] is True


def test_toric_rejections():
    with pytest.raises(NonPrimitiveRay):
        toric_analyze(ToricInstance.make([(2,), (-1,)], [1, 1]))
    with pytest.raises(NotComplete):
        toric_analyze(ToricInstance.make([(1, 0), (0, 1)], [1, 1]))


def test_delzant_rejections():
    with pytest.raises(Unbounded):
        delzant_analyze(DelzantInstance.make([((1, 0), 0), ((0, 1), 0)]))
    with pytest.raises(EmptyPolytope):
        delzant_analyze(DelzantInstance.make([((1,), -1), ((-1,), 0)]))


def test_degenerate_polytope_is_flagged():
    # the segment [0, 0] x [0, 1]: not full-dimensional
    out = delzant_analyze(DelzantInstance.box([0, 1]))
    assert out["full_dimensional"] is False
    assert out["interior"] is None


@settings(max_examples=30)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_shifted_divisor_is_centered(seed, r):
    rng = np.random.default_rng(seed)
    rays = DelzantInstance.simplex(r).normals
    coeffs = [F(int(rng.integers(-6, 7)), int(rng.integers(1, 4))) for _ in rays]
    out = toric_analyze(ToricInstance(rays, tuple(coeffs)))
    assert all(x == 0 for x in canonical_point(potential(rays, out["shifted_divisor"])).d_crit)


@settings(max_examples=30)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_critical_point_is_interior(seed, r):
    rng = np.random.default_rng(seed)
    lengths = [F(int(rng.integers(1, 9)), int(rng.integers(1, 4))) for _ in range(r)]
    out = delzant_analyze(DelzantInstance.box(lengths), samples=3)
    assert out["interior"] is True
    assert out["d_crit"] == tuple(a / 2 for a in lengths)
