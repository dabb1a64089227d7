"""Model domains, Minkowski gauges, structured holomorphic maps, analytic discs.

Domains are immutable descriptors exposing a membership functional
``gauge_value`` with the property z in domain iff gauge_value(z) < 1. For
gauge balls the functional is the Minkowski gauge itself (positively
homogeneous); for Reinhardt power domains it is |z^alpha|. Along any
holomorphic disc these functionals are subharmonic, which is what justifies
certifying disc validity from boundary samples plus a margin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DimensionMismatchError, DomainViolationError
from .weights import Point, _check_point

__all__ = [
    "GaugeSpec",
    "ABS_SUM",
    "ABS_PLUS_SQRT_ABS",
    "MAX_ABS",
    "minkowski",
    "gauge_value_bisect",
    "Domain",
    "UnitDisc",
    "Polydisc",
    "GaugeBall",
    "ReinhardtPower",
    "ProductDomain",
    "Scaled",
    "contains",
    "flatten_to_polydisc",
    "CoordinateProjection",
    "CoordinatePower",
    "PerCoordinateMobius",
    "MonomialMap",
    "Affine",
    "HoloMapSpec",
    "identity_map",
    "eval_map",
    "AnalyticDisc",
    "boundary_samples_for_degree",
    "disc_validity",
]


# ---------------------------------------------------------------------------
# gauges


@dataclass(frozen=True)
class GaugeSpec:
    """Minkowski gauge of a balanced model ball.

    kind is one of "abs_sum" (sum of coordinate moduli), "abs_plus_sqrt_abs"
    (|z| + sqrt|w| ball in C^2, non-convex), "max_abs" (polydisc gauge).
    """

    kind: str

    _KINDS = ("abs_sum", "abs_plus_sqrt_abs", "max_abs")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainViolationError(f"unknown gauge kind {self.kind!r}")

    @property
    def convex(self) -> bool:
        return self.kind != "abs_plus_sqrt_abs"


ABS_SUM = GaugeSpec("abs_sum")
ABS_PLUS_SQRT_ABS = GaugeSpec("abs_plus_sqrt_abs")
MAX_ABS = GaugeSpec("max_abs")


def minkowski(gauge: GaugeSpec, z: Sequence[complex]) -> float:
    """Minkowski functional h(z) = inf{t > 0 : z/t in ball}.

    Positively homogeneous of degree 1. The |z| + sqrt|w| gauge is solved in
    closed form through the quadratic in sqrt(t).
    """
    z = _check_point(z)
    if gauge.kind == "abs_sum":
        return math.fsum(abs(c) for c in z)
    if gauge.kind == "max_abs":
        return max(abs(c) for c in z)
    # abs_plus_sqrt_abs: |z1|/t + sqrt(|z2|/t) = 1 gives s^2 - sqrt|z2| s - |z1| = 0
    # for s = sqrt(t); h is the square of the positive root.
    if len(z) != 2:
        raise DimensionMismatchError("abs_plus_sqrt_abs gauge lives on C^2")
    a = abs(z[0])
    b = math.sqrt(abs(z[1]))
    if a == 0.0 and b == 0.0:
        return 0.0
    s = 0.5 * (b + math.sqrt(b * b + 4.0 * a))
    return s * s


def gauge_value_bisect(gauge: GaugeSpec, z: Sequence[complex], tol: float = 1e-12) -> float:
    """Minkowski functional by monotone bisection on t -> gauge shape of z/t.

    Slow reference path used to cross-check the closed forms.
    """
    z = _check_point(z)

    def shape(t: float) -> float:
        w = tuple(c / t for c in z)
        if gauge.kind == "abs_sum":
            return math.fsum(abs(c) for c in w)
        if gauge.kind == "max_abs":
            return max(abs(c) for c in w)
        return abs(w[0]) + math.sqrt(abs(w[1]))

    if all(c == 0 for c in z):
        return 0.0
    lo, hi = 0.0, 1.0
    while shape(hi) >= 1.0:
        hi *= 2.0
        if hi > 1e12:
            raise DomainViolationError("gauge bisection diverged")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if shape(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# domains


class Domain:
    """Base descriptor. Subclasses implement dim and gauge_value."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def gauge_value(self, z: Point) -> float:
        """Membership functional: z lies in the open domain iff this is < 1."""
        raise NotImplementedError

    def check_dim(self, z: Sequence[complex]) -> Point:
        z = _check_point(z)
        if len(z) != self.dim:
            raise DimensionMismatchError(
                f"point dimension {len(z)} does not match domain dimension {self.dim}"
            )
        return z


@dataclass(frozen=True)
class UnitDisc(Domain):
    @property
    def dim(self) -> int:
        return 1

    def gauge_value(self, z: Point) -> float:
        return abs(self.check_dim(z)[0])


@dataclass(frozen=True)
class Polydisc(Domain):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainViolationError("polydisc dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    def gauge_value(self, z: Point) -> float:
        return max(abs(c) for c in self.check_dim(z))


@dataclass(frozen=True)
class GaugeBall(Domain):
    gauge: GaugeSpec
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainViolationError("gauge ball dimension must be >= 1")
        if self.gauge.kind == "abs_plus_sqrt_abs" and self.n != 2:
            raise DimensionMismatchError("abs_plus_sqrt_abs ball lives on C^2")

    @property
    def dim(self) -> int:
        return self.n

    def gauge_value(self, z: Point) -> float:
        return minkowski(self.gauge, self.check_dim(z))


@dataclass(frozen=True)
class ReinhardtPower(Domain):
    """Domain {z : |z_1^a1 ... z_n^an| < 1} for relatively prime exponents."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        if not alpha or any(a < 1 for a in alpha):
            raise DomainViolationError("monomial exponents must be integers >= 1")
        if math.gcd(*alpha) != 1:
            raise DomainViolationError("monomial exponents must be relatively prime")
        object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self) -> int:
        return len(self.alpha)

    def monomial(self, z: Point) -> complex:
        z = self.check_dim(z)
        out = 1.0 + 0.0j
        for c, a in zip(z, self.alpha):
            out *= c**a
        return out

    def gauge_value(self, z: Point) -> float:
        return abs(self.monomial(z))


@dataclass(frozen=True)
class ProductDomain(Domain):
    left: Domain
    right: Domain

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    def split(self, z: Sequence[complex]) -> tuple[Point, Point]:
        z = self.check_dim(z)
        return z[: self.left.dim], z[self.left.dim :]

    def gauge_value(self, z: Point) -> float:
        zl, zr = self.split(z)
        return max(self.left.gauge_value(zl), self.right.gauge_value(zr))


@dataclass(frozen=True)
class Scaled(Domain):
    """The domain r * inner, evaluated by rescaling coordinates."""

    r: float
    inner: Domain

    def __post_init__(self):
        if not (0.0 < self.r <= 1.0) or not math.isfinite(self.r):
            raise DomainViolationError(f"scale must lie in (0, 1], got {self.r!r}")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def rescale(self, z: Sequence[complex]) -> Point:
        return tuple(c / self.r for c in self.check_dim(z))

    def gauge_value(self, z: Point) -> float:
        return self.inner.gauge_value(self.rescale(z))


DomainSpec = Domain  # alias: any of the descriptor variants above


def contains(dom: Domain, z: Sequence[complex]) -> bool:
    """Open-domain membership test."""
    return dom.gauge_value(_check_point(z)) < 1.0


def flatten_to_polydisc(dom: Domain) -> int | None:
    """Dimension of ``dom`` as a polydisc, or None if it is not one.

    Unit discs, polydiscs, max-abs gauge balls, and products thereof all
    flatten; scaling does not (it changes the radius).
    """
    if isinstance(dom, UnitDisc):
        return 1
    if isinstance(dom, Polydisc):
        return dom.n
    if isinstance(dom, GaugeBall) and dom.gauge.kind == "max_abs":
        return dom.n
    if isinstance(dom, ProductDomain):
        nl = flatten_to_polydisc(dom.left)
        nr = flatten_to_polydisc(dom.right)
        if nl is not None and nr is not None:
            return nl + nr
    return None


# ---------------------------------------------------------------------------
# structured holomorphic maps


@dataclass(frozen=True)
class CoordinateProjection:
    indices: tuple[int, ...]

    def out_dim(self, in_dim: int) -> int:
        if any(i < 0 or i >= in_dim for i in self.indices):
            raise DimensionMismatchError("projection index out of range")
        return len(self.indices)

    def apply(self, z: Point) -> Point:
        return tuple(z[i] for i in self.indices)


@dataclass(frozen=True)
class CoordinatePower:
    """z -> (z_1^{k_1}, ..., z_n^{k_n}) with integer exponents >= 1."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(k) for k in self.exponents)
        if not exps or any(k < 1 for k in exps):
            raise DomainViolationError("coordinate powers must be integers >= 1")
        object.__setattr__(self, "exponents", exps)

    def out_dim(self, in_dim: int) -> int:
        if in_dim != len(self.exponents):
            raise DimensionMismatchError("coordinate power arity mismatch")
        return in_dim

    def apply(self, z: Point) -> Point:
        return tuple(c**k for c, k in zip(z, self.exponents))


@dataclass(frozen=True)
class PerCoordinateMobius:
    """Per-coordinate disc automorphism z_j -> e^{i theta_j}(z_j - a_j)/(1 - conj(a_j) z_j)."""

    params: tuple[tuple[complex, float], ...]

    def __post_init__(self):
        params = tuple((complex(a), float(t)) for a, t in self.params)
        for a, _ in params:
            if not abs(a) < 1.0:
                raise DomainViolationError("Mobius centers must lie in the unit disc")
        object.__setattr__(self, "params", params)

    def out_dim(self, in_dim: int) -> int:
        if in_dim != len(self.params):
            raise DimensionMismatchError("per-coordinate Mobius arity mismatch")
        return in_dim

    def apply(self, z: Point) -> Point:
        out = []
        for c, (a, theta) in zip(z, self.params):
            w = (c - a) / (1.0 - a.conjugate() * c)
            out.append(w if theta == 0.0 else cmath.exp(1j * theta) * w)
        return tuple(out)

    def inverse(self) -> "PerCoordinateMobius":
        # inverse of e^{it} Mob_a is w -> Mob_{-a e^{it}}(e^{-it} w) rotated back
        return PerCoordinateMobius(
            tuple((-a * cmath.exp(1j * t), -t) for a, t in self.params)
        )


@dataclass(frozen=True)
class MonomialMap:
    """z -> z^alpha = z_1^{a_1} ... z_n^{a_n} into C."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        if not alpha or any(a < 0 for a in alpha):
            raise DomainViolationError("monomial exponents must be integers >= 0")
        object.__setattr__(self, "alpha", alpha)

    def out_dim(self, in_dim: int) -> int:
        if in_dim != len(self.alpha):
            raise DimensionMismatchError("monomial arity mismatch")
        return 1

    def apply(self, z: Point) -> Point:
        out = 1.0 + 0.0j
        for c, a in zip(z, self.alpha):
            out *= c**a
        return (out,)


@dataclass(frozen=True)
class Affine:
    """z -> M z + b with a dense complex matrix, rows as tuples."""

    matrix: tuple[tuple[complex, ...], ...]
    offset: tuple[complex, ...]

    def __post_init__(self):
        matrix = tuple(tuple(complex(c) for c in row) for row in self.matrix)
        offset = tuple(complex(c) for c in self.offset)
        if not matrix or len({len(r) for r in matrix}) != 1:
            raise DomainViolationError("affine matrix must be rectangular and nonempty")
        if len(offset) != len(matrix):
            raise DimensionMismatchError("affine offset length must match row count")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", offset)

    def out_dim(self, in_dim: int) -> int:
        if in_dim != len(self.matrix[0]):
            raise DimensionMismatchError("affine arity mismatch")
        return len(self.matrix)

    def apply(self, z: Point) -> Point:
        return tuple(
            sum(m * c for m, c in zip(row, z)) + b
            for row, b in zip(self.matrix, self.offset)
        )


MapPrimitive = Union[CoordinateProjection, CoordinatePower, PerCoordinateMobius,
                     MonomialMap, Affine]


@dataclass(frozen=True)
class HoloMapSpec:
    """Composition chain of structured primitives; empty chain is the identity.

    Instances are callable on points, so they plug directly into the weight
    transfer operations.
    """

    chain: tuple[MapPrimitive, ...] = ()

    def __call__(self, z: Sequence[complex]) -> Point:
        out = _check_point(z)
        for stage in self.chain:
            stage.out_dim(len(out))  # arity check
            out = stage.apply(out)
        return out

    def out_dim(self, in_dim: int) -> int:
        d = in_dim
        for stage in self.chain:
            d = stage.out_dim(d)
        return d


def identity_map() -> HoloMapSpec:
    return HoloMapSpec(())


def eval_map(
    F: HoloMapSpec,
    z: Sequence[complex],
    codomain: Domain | None = None,
    codomains: Sequence[Domain | None] | None = None,
) -> Point:
    """Evaluate a structured map, optionally checking codomain membership.

    ``codomains`` aligns with the chain stages; ``codomain`` checks the final
    value. A violated check raises DomainViolationError.
    """
    out = _check_point(z)
    stages: Sequence[Domain | None]
    if codomains is None:
        stages = [None] * len(F.chain)
    elif len(codomains) != len(F.chain):
        raise DimensionMismatchError("codomain list must align with the chain")
    else:
        stages = codomains
    for stage, cod in zip(F.chain, stages):
        stage.out_dim(len(out))
        out = stage.apply(out)
        if cod is not None and not contains(cod, out):
            raise DomainViolationError(f"intermediate value {out!r} left its codomain")
    if codomain is not None and not contains(codomain, out):
        raise DomainViolationError(f"value {out!r} lies outside the requested codomain")
    return out


# ---------------------------------------------------------------------------
# analytic discs


@dataclass(frozen=True)
class AnalyticDisc:
    """Polynomial map from the unit disc into C^n.

    ``coefficients[j]`` are the ascending-power coefficients of output
    coordinate j. Validity inside a target domain is certified by
    disc_validity (boundary sampling with a margin), never assumed.
    """

    coefficients: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        coeffs = tuple(tuple(complex(c) for c in row) for row in self.coefficients)
        if not coeffs or any(not row for row in coeffs):
            raise DomainViolationError("disc needs at least one coefficient per coordinate")
        for row in coeffs:
            for c in row:
                if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                    raise DomainViolationError("disc coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_out(self) -> int:
        return len(self.coefficients)

    @property
    def degree(self) -> int:
        return max(len(row) - 1 for row in self.coefficients)

    def __call__(self, lam: complex) -> Point:
        lam = complex(lam)
        out = []
        for row in self.coefficients:
            acc = 0.0 + 0.0j
            for c in reversed(row):
                acc = acc * lam + c
            out.append(acc)
        return tuple(out)

    @staticmethod
    def constant(point: Sequence[complex]) -> "AnalyticDisc":
        return AnalyticDisc(tuple((complex(c),) for c in point))

    @staticmethod
    def affine(base: Sequence[complex], direction: Sequence[complex]) -> "AnalyticDisc":
        return AnalyticDisc(
            tuple((complex(b), complex(d)) for b, d in zip(base, direction))
        )


def boundary_samples_for_degree(degree: int) -> int:
    """Sample count for disc certification: 64 per coefficient order."""
    return 64 * (degree + 1)


def disc_validity(disc: AnalyticDisc, dom: Domain, margin: float = 1e-6) -> bool:
    """Certify that the disc maps the closed unit disc into ``dom``.

    Checks gauge_value(disc(e^{i theta})) <= 1 - margin on 64*(degree+1)
    uniform boundary samples. The membership functionals are subharmonic
    along the disc, so the boundary maximum controls the interior; the
    mandatory margin absorbs excursions between samples.
    """
    if not (margin > 0.0 and math.isfinite(margin)):
        raise DomainViolationError(f"margin must be positive, got {margin!r}")
    if disc.n_out != dom.dim:
        raise DimensionMismatchError("disc output dimension does not match the domain")
    n = boundary_samples_for_degree(disc.degree)
    step = 2.0 * math.pi / n
    for k in range(n):
        z = disc(cmath.exp(1j * (step * k)))
        if not dom.gauge_value(z) <= 1.0 - margin:
            return False
    return True
