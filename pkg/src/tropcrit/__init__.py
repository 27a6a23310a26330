"""Positive critical points of complete Laurent polynomials over Puiseux series.

The exact tropical part (canonical point, levels, certificates) works over
rationals; the leading coefficients and the series lift are floating point.
"""
from .errors import (
    InvariantViolation,
    MaxIterExceeded,
    NotComplete,
    NotLaurent,
    ParseError,
    StalledProgress,
    TropCritError,
)
from .coefficient import solve_coeff
from .lift import CritResult, check_nondegenerate, gradient_G, residual_valuation, solve_critical
from .mutation import Mutation, check_mutation_invariance, mutate_pullback
from .newton import canonical_point
from .series import PuiseuxSeries, TorusPoint
from .toric import DelzantInstance, ToricInstance, delzant_analyze, toric_analyze
from .tropical import (
    LaurentPoly,
    check_tropical_critical,
    level_data,
    polytope_membership,
    trop_eval,
    trop_max,
)

__version__ = "0.1.0"
