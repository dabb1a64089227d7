"""Exact one-variable kernel on the unit disc.

Provides the Mobius distance m(a, z) = |(z - a)/(1 - conj(a) z)|, disc
automorphisms, finite weighted Blaschke-type products, and certified
truncation of infinite weighted products. Everything here is pure scalar
arithmetic on built-in complex numbers; these functions are the ground truth
the rest of the package is checked against.

Domain checks are deterministic: a point is accepted iff it is finite and its
modulus is strictly below 1, so moduli in [1 - 1e-12, 1) pass and moduli >= 1
are rejected.

All functions are pure and stateless; values may be shared freely across
threads or processes.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import DomainViolationError, TailBoundError

__all__ = [
    "check_disc_point",
    "mobius_distance",
    "mobius_automorphism",
    "validate_disc_weight",
    "weighted_product_disc",
    "truncated_infinite_product",
]

#: entries of a finite disc weight: (pole, exponent) pairs
DiscWeightEntries = Sequence[tuple[complex, float]]


def check_disc_point(z: complex, name: str = "point") -> complex:
    """Validate that ``z`` is a finite point of the open unit disc."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainViolationError(f"{name} must be finite, got {z!r}")
    if not abs(z) < 1.0:
        raise DomainViolationError(f"{name} must have modulus < 1, got |{z!r}| = {abs(z)!r}")
    return z


def mobius_distance(a: complex, z: complex) -> float:
    """Mobius distance |(z - a)/(1 - conj(a) z)| between disc points.

    Symmetric in its arguments, valued in [0, 1), and zero iff a == z.
    """
    a = check_disc_point(a, "a")
    z = check_disc_point(z, "z")
    if a == z:
        return 0.0
    return abs((z - a) / (1.0 - a.conjugate() * z))


def mobius_automorphism(a: complex, theta: float, z: complex) -> complex:
    """Disc automorphism z -> e^{i theta} (z - a)/(1 - conj(a) z)."""
    a = check_disc_point(a, "a")
    z = check_disc_point(z, "z")
    if not math.isfinite(theta):
        raise DomainViolationError(f"rotation angle must be finite, got {theta!r}")
    w = (z - a) / (1.0 - a.conjugate() * z)
    if theta == 0.0:
        return w
    return cmath.exp(1j * theta) * w


def validate_disc_weight(entries: DiscWeightEntries) -> list[tuple[complex, float]]:
    """Validate a finite weight on the disc: poles in E, positive weights,
    pairwise distinct poles. Returns the cleaned (pole, weight) list."""
    cleaned: list[tuple[complex, float]] = []
    seen: set[complex] = set()
    for pole, weight in entries:
        pole = check_disc_point(pole, "pole")
        weight = float(weight)
        if not math.isfinite(weight) or weight <= 0.0:
            raise DomainViolationError(f"weights must be positive and finite, got {weight!r}")
        if pole in seen:
            raise DomainViolationError(f"poles must be pairwise distinct, {pole!r} repeats")
        seen.add(pole)
        cleaned.append((pole, weight))
    return cleaned


def weighted_product_disc(entries: DiscWeightEntries, z: complex) -> float:
    """Weighted Mobius product prod_a m(a, z)^{w(a)} over a finite weight.

    The empty weight gives 1 (the convention 0^0 = 1 makes absent poles
    contribute unit factors). The product is accumulated in log space, with
    an exact-zero short circuit when z hits a pole, so many-pole weights do
    not underflow.
    """
    z = check_disc_point(z, "z")
    cleaned = validate_disc_weight(entries)
    if len(cleaned) == 1:  # avoid the exp/log round trip for a lone factor
        pole, weight = cleaned[0]
        return mobius_distance(pole, z) ** weight
    log_acc = 0.0
    for pole, weight in cleaned:
        m = mobius_distance(pole, z)
        if m == 0.0:
            return 0.0
        log_acc += weight * math.log(m)
    return math.exp(log_acc)


#: tail bound callback: consumed-factor count -> upper bound, or a certified
#: (lower, upper) enclosure, of the remaining log mass sum e_j * (-log m_j)
TailBound = Callable[[int], Union[float, tuple[float, float]]]


def truncated_infinite_product(
    factors: Iterable[tuple[float, float]],
    tol: float,
    tail_bound: TailBound,
    max_terms: int = 10_000_000,
) -> float:
    """Evaluate an infinite product prod m_j^{e_j} to absolute tolerance tol.

    ``factors`` yields (modulus, exponent) pairs with modulus in [0, 1] and
    exponent >= 0, so partial products are nonincreasing and the value is the
    infimum over finite subproducts. ``tail_bound(k)`` must return, for every
    k where it can, either an upper bound B or an enclosure (lo, hi) of the
    remaining log mass sum_{j>k} e_j * (-log m_j); return (0, inf) when no
    certificate is available yet. Truncation stops once the enclosure pins
    the limit within tol, and the returned value is the midpoint-corrected
    partial product.

    A finite generator is multiplied out exactly. Raises TailBoundError if
    the budget ends before the tail certifies tol.
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise DomainViolationError(f"tol must be positive and finite, got {tol!r}")
    log_acc = 0.0
    count = 0
    it: Iterator[tuple[float, float]] = iter(factors)
    for modulus, exponent in it:
        modulus = float(modulus)
        exponent = float(exponent)
        if not (0.0 <= modulus <= 1.0):
            raise DomainViolationError(f"factor modulus must lie in [0, 1], got {modulus!r}")
        if not (exponent >= 0.0 and math.isfinite(exponent)):
            raise DomainViolationError(f"factor exponent must be >= 0, got {exponent!r}")
        if modulus == 0.0 and exponent > 0.0:
            return 0.0
        if exponent > 0.0 and modulus < 1.0:
            log_acc += exponent * math.log(modulus)
        count += 1
        if count >= max_terms:
            break
        bound = tail_bound(count)
        lo, hi = (0.0, float(bound)) if not isinstance(bound, tuple) else bound
        if not (0.0 <= lo <= hi):
            raise TailBoundError(f"invalid tail enclosure ({lo!r}, {hi!r}) at k={count}")
        if math.isinf(hi):
            continue
        partial = math.exp(log_acc)
        if partial * (math.exp(-lo) - math.exp(-hi)) <= tol:
            return partial * math.exp(-0.5 * (lo + hi))
    else:
        # generator exhausted: the finite product is exact
        return math.exp(log_acc)
    raise TailBoundError(
        f"tail bound failed to certify tol={tol!r} within {max_terms} factors"
    )
