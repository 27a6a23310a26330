"""Built-in worked examples and a small seeded invariant sweep.

Each check returns ``(name, passed, detail)``; ``run_selfcheck`` collects
them into report rows.  Used by ``tropcrit selfcheck``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .corpus import random_complete
from .errors import NotComplete, NotLaurent
from .lift import solve_critical
from .mutation import Mutation, mutate_pullback
from .newton import canonical_point
from .series import PuiseuxSeries
from .toric import DelzantInstance, ToricInstance, delzant_analyze, toric_analyze
from .tropical import LaurentPoly, check_tropical_critical, trop_eval, trop_max

t = PuiseuxSeries.monomial


def _poly(dim, items):
    return LaurentPoly.from_monomials(dim, items)


def check_half_point():
    W = _poly(1, [(0, 1.0, (1,)), (1, 1.0, (-1,))])
    R = solve_critical(W, 3)
    ok = R.d_crit == (Fraction(1, 2),) and R.exact and abs(R.d_coeff[0]) < 1e-12
    return "x + t/x is t^(1/2) exactly", ok, f"d_crit={R.d_crit[0]} order={R.order}"


def check_series_example():
    W = _poly(1, [(0, 1.0, (1,)), (0, 1.0, (-1,)), (1, 1.0, (2,))])
    R = solve_critical(W, 3)
    x = R.coordinates()[0]
    want = PuiseuxSeries.from_terms([(0, 1.0), (1, -1.0), (2, 2.5)], 3)
    ok = x.allclose(want, tol=1e-10)
    return "x + 1/x + t x^2 is 1 - t + 5/2 t^2", ok, str(x)


def check_decoupled():
    W = _poly(2, [(0, 1.0, (1, 0)), (1, 1.0, (-1, 0)), (1, 1.0, (0, 1)), (1, 1.0, (0, -1))])
    R = solve_critical(W, 3)
    ok = R.d_crit == (Fraction(1, 2), 0) and R.exact
    return "x + t/x + t y + t/y is (t^(1/2), 1)", ok, f"d_crit={tuple(map(str, R.d_crit))}"


def check_simplices():
    bad = []
    for r in range(1, 7):
        d = delzant_analyze(DelzantInstance.simplex(r), nondeg_order=1)["d_crit"]
        if d != (Fraction(1, r + 1),) * r:
            bad.append(r)
    return "simplex r=1..6 centered at 1/(r+1)", not bad, f"failing r: {bad}" if bad else "all r"


def check_anticanonical():
    cases = {
        "P1": [(1,), (-1,)],
        "P2": [(1, 0), (0, 1), (-1, -1)],
        "P1xP1": [(1, 0), (-1, 0), (0, 1), (0, -1)],
        "Bl_pt P2": [(1, 0), (0, 1), (-1, -1), (1, 1)],
    }
    bad = []
    for name, rays in cases.items():
        out = toric_analyze(ToricInstance.make(rays, [1] * len(rays)))
        if any(out["d_crit"]) or out["integrally_balanced"] is not True:
            bad.append(name)
    return "anticanonical divisors are balanced at 0", not bad, f"failing: {bad}" if bad else "all"


def check_not_complete():
    W = _poly(2, [(0, 1.0, (1, 0)), (0, 1.0, (1, 1))])
    try:
        solve_critical(W, 1)
    except NotComplete:
        return "x + xy is rejected as not complete", True, "NotComplete"
    return "x + xy is rejected as not complete", False, "a point was produced"


def check_pullback():
    one_ty = {(0, 0): PuiseuxSeries.constant(1.0), (0, 1): t(1, 1.0)}
    W = LaurentPoly.from_terms(2, [
        (PuiseuxSeries.constant(1.0), (1, 0)), (t(1, 1.0), (0, 1)),
        (PuiseuxSeries.constant(1.0), (-1, 0)), (t(1, 1.0), (-1, 1)), (t(1, 1.0), (0, -1)),
    ])
    mu = Mutation.make(2, 0, one_ty[(0, 0)], (0, 0), one_ty[(0, 1)], (0, 1))
    Wp = mutate_pullback(W, mu)
    ok = sorted(Wp.terms, key=lambda x: x[1]) == sorted(W.terms, key=lambda x: x[1])
    W2 = _poly(2, [(0, 1.0, (1, 0)), (0, 1.0, (0, 1)), (1, 1.0, (-1, -1))])
    mu2 = Mutation.make(2, 1, 1.0, (0, 0), 1.0, (1, 0))
    try:
        mutate_pullback(W2, mu2)
        ok = False
    except NotLaurent:
        pass
    return "cluster pullback and Laurentness test", ok, str(Wp)


def check_corpus(seed: int = 0, count: int = 12):
    """Trop-max equality, tropical criticality, residual valuation and shift law
    on a few seeded random instances."""
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(count):
        r = 1 + k % 3
        W = random_complete(rng, r, max_terms=6)
        cp = canonical_point(W)
        if trop_eval(W, cp.d_crit) != trop_max(W) or not check_tropical_critical(W, cp.d_crit):
            failures.append((k, "tropical"))
            continue
        R = solve_critical(W, 2, probe_seed=seed)
        if not R.residual_ok:
            failures.append((k, "residual"))
        d = tuple(int(x) for x in rng.integers(-2, 3, size=r))
        if canonical_point(W.shifted(d)).d_crit != tuple(a - b for a, b in zip(cp.d_crit, d)):
            failures.append((k, "shift"))
    return f"invariants on {count} random instances", not failures, str(failures) if failures else "all"


CHECKS = (
    check_half_point,
    check_series_example,
    check_decoupled,
    check_simplices,
    check_anticanonical,
    check_not_complete,
    check_pullback,
)


def run_selfcheck(seed: int = 0) -> list[dict]:
    out = []
    for fn in CHECKS + (lambda: check_corpus(seed),):
        try:
            name, ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            name, ok, detail = getattr(fn, "__name__", "check"), False, f"{type(exc).__name__}: {exc}"
        out.append({"check": name, "passed": bool(ok), "detail": detail})
    return out

