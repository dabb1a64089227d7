"""Exception types shared across the package."""


class GreenpolesError(Exception):
    """Base class for all package errors."""


class DomainViolationError(GreenpolesError):
    """A point or parameter lies outside its mathematical domain."""


class DimensionMismatchError(DomainViolationError):
    """Operands disagree on ambient dimension."""


class NoExactFormulaError(GreenpolesError):
    """No closed form applies to this (domain, weight, point) combination.

    Callers should fall back to the variational estimators.
    """


class JacobianConditionError(DomainViolationError):
    """A proper-map transfer hit a critical point at a pole preimage."""


class TailBoundError(GreenpolesError):
    """An infinite-product truncation could not be certified to tolerance."""


class SearchBudgetError(GreenpolesError):
    """A variational search exhausted its budget without a certified witness."""


class InvariantViolationError(GreenpolesError):
    """An internal mathematical invariant failed; indicates a bug."""


class SpecFileError(GreenpolesError):
    """A job specification file is malformed or inconsistent."""
