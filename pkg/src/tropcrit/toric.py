"""Toric divisors and moment polytopes.

Both applications build the Laurent polynomial sum_i t^{c_i} x^{v_i} from
integer vectors v_i and rational constants c_i and read off the canonical
point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyPolytope, NonPrimitiveRay, NotComplete, Unbounded
from .lift import check_nondegenerate, solve_critical
from .newton import canonical_point
from .ratgeom import dot, is_complete, lp_solve, vec
from .series import PuiseuxSeries
from .tropical import LaurentPoly, trop_eval


def _check_primitive(vectors, what: str):
    seen = set()
    for v in vectors:
        if any(x.denominator != 1 for x in v):
            raise NonPrimitiveRay(f"{what} {tuple(map(str, v))} is not an integer vector")
        if math.gcd(*(int(x) for x in v)) != 1:
            raise NonPrimitiveRay(f"{what} {tuple(map(str, v))} is not primitive")
        if v in seen:
            raise ValueError(f"repeated {what} {tuple(map(str, v))}")
        seen.add(v)


def potential(vectors, constants) -> LaurentPoly:
    """sum_i t^{c_i} x^{v_i}."""
    dim = len(vectors[0])
    return LaurentPoly(
        dim, tuple((PuiseuxSeries.monomial(c, 1.0), v) for v, c in zip(vectors, constants))
    )


@dataclass(frozen=True)
class ToricInstance:
    rays: tuple
    coeffs: tuple

    def __post_init__(self):
        if len(self.rays) != len(self.coeffs):
            raise ValueError("one divisor coefficient per ray is required")
        if not self.rays:
            raise ValueError("no rays given")

    @classmethod
    def make(cls, rays, coeffs) -> "ToricInstance":
        return cls(tuple(vec(r) for r in rays), vec(coeffs))

    @property
    def dim(self) -> int:
        return len(self.rays[0])


def toric_analyze(inst: ToricInstance) -> dict:
    """Canonical point of the divisor potential, balance test and distinguished divisor."""
    _check_primitive(inst.rays, "ray")
    if not is_complete(inst.rays, inst.dim):
        raise NotComplete("the rays do not positively span the lattice: the fan is not complete")
    W = potential(inst.rays, inst.coeffs)
    cp = canonical_point(W)
    integral_c = all(c.denominator == 1 for c in inst.coeffs)
    integral_d = all(x.denominator == 1 for x in cp.d_crit)
    balanced = (integral_c and integral_d) if integral_c else None
    shifted = tuple(c + dot(v, cp.d_crit) for v, c in zip(inst.rays, inst.coeffs))
    return {
        "d_crit": cp.d_crit,
        "tau": cp.tau,
        "integrally_balanced": balanced,
        "distinguished_divisor": shifted if balanced else None,
        "shifted_divisor": shifted,
        "stages": cp.trace(),
    }


@dataclass(frozen=True)
class DelzantInstance:
    normals: tuple
    constants: tuple

    def __post_init__(self):
        if len(self.normals) != len(self.constants):
            raise ValueError("one constant per facet normal is required")
        if not self.normals:
            raise ValueError("no facets given")

    @classmethod
    def make(cls, facets) -> "DelzantInstance":
        """From ``(normal, constant)`` pairs describing <v, d> + c >= 0."""
        return cls(tuple(vec(v) for v, _ in facets), vec(c for _, c in facets))

    @classmethod
    def simplex(cls, r: int) -> "DelzantInstance":
        facets = [(tuple(int(i == j) for j in range(r)), 0) for i in range(r)]
        facets.append(((-1,) * r, 1))
        return cls.make(facets)

    @classmethod
    def box(cls, lengths) -> "DelzantInstance":
        r = len(lengths)
        facets = []
        for i, a in enumerate(lengths):
            e = tuple(int(i == j) for j in range(r))
            facets.append((e, 0))
            facets.append((tuple(-x for x in e), a))
        return cls.make(facets)

    @property
    def dim(self) -> int:
        return len(self.normals[0])


def _inradius_lp(inst: DelzantInstance):
    """max s subject to <v_i, d> + c_i >= s (d free).  Returns the LP result."""
    r = inst.dim
    # variables d_1..d_r (free), s (free): -<v_i,d> + s <= c_i
    A = [[-x for x in v] + [Fraction(1)] for v in inst.normals]
    cobj = [Fraction(0)] * r + [Fraction(1)]
    res = lp_solve(cobj, A_ub=A, b_ub=list(inst.constants), free=range(r + 1), maximize=True)
    return res


def delzant_analyze(inst: DelzantInstance, nondeg_order=1, samples: int = 10, seed: int = 0) -> dict:
    """Canonical point of the moment-polytope potential and its certificates.

    Smoothness of the polytope at its vertices is not verified.
    """
    _check_primitive(inst.normals, "facet normal")
    if not is_complete(inst.normals, inst.dim):
        # bounded nonempty polyhedra have normals positively spanning the space
        feas = _inradius_lp(inst)
        if feas.status == "infeasible":
            raise EmptyPolytope("the facet inequalities have no common solution")
        raise Unbounded("the facet normals do not positively span: polytope is unbounded")
    res = _inradius_lp(inst)
    if res.status == "infeasible" or res.optimum < 0:
        raise EmptyPolytope("the facet inequalities have no common solution")
    full_dim = res.optimum > 0
    W = potential(inst.normals, inst.constants)
    cp = canonical_point(W)
    margins = tuple(dot(v, cp.d_crit) + c for v, c in zip(inst.normals, inst.constants))
    interior = all(m > 0 for m in margins) if full_dim else None
    crit = solve_critical(W, nondeg_order)
    cert = check_nondegenerate(W, crit, samples=samples, seed=seed)
    return {
        "d_crit": cp.d_crit,
        "tau": cp.tau,
        "full_dimensional": full_dim,
        "interior": interior,
        "facet_margins": margins,
        "trop_value": trop_eval(W, cp.d_crit),
        "nondegenerate": cert.passed,
        "nondegeneracy": cert,
        "caveat": "vertex smoothness of the polytope is not checked",
        "stages": cp.trace(),
    }
