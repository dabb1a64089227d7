"""Pole-weighted invariant functions on model domains in C^n.

Exact evaluators for the weighted Mobius and pluricomplex Green functions
and the extremal minimal/maximal families on discs, polydiscs, balanced
gauge balls, and monomial Reinhardt domains; certified variational bounds
(competitor maps and analytic-disc search) where no closed form exists; and
a seeded property harness verifying the family axioms and structural
inequalities. The `greenpoles` CLI exposes eval / estimate / verify /
reproduce.
"""

from .disc import (
    mobius_automorphism,
    mobius_distance,
    truncated_infinite_product,
    weighted_product_disc,
)
from .domains import (
    ABS_PLUS_SQRT_ABS,
    ABS_SUM,
    MAX_ABS,
    AnalyticDisc,
    GaugeBall,
    GaugeSpec,
    HoloMapSpec,
    Polydisc,
    ProductDomain,
    ReinhardtPower,
    Scaled,
    UnitDisc,
    contains,
    disc_validity,
    eval_map,
    minkowski,
)
from .errors import (
    DimensionMismatchError,
    DomainViolationError,
    GreenpolesError,
    InvariantViolationError,
    JacobianConditionError,
    NoExactFormulaError,
    SearchBudgetError,
    SpecFileError,
    TailBoundError,
)
from .exact import (
    ExactValue,
    InvariantKind,
    dmax_eval,
    dmin_countable_pole_example,
    dmin_exact,
    dmin_liouville_product,
    dmin_reinhardt,
    green_disc,
    green_exact,
    green_polydisc_collinear,
    green_transfer_proper,
    lempert_balanced_convex,
    lempert_exact,
    lempert_polydisc,
    mobius_exact,
    mobius_polydisc_product_poles,
)
from .weights import WeightMap, leq, pullback, pushforward_sup

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
