"""Finite-support weight functions on C^n and their transfer calculus.

A WeightMap assigns positive exponents to finitely many pole points. The
calculus implemented here is the pullback q o F along a holomorphic map,
the fiberwise sup pushforward, restriction, and the pointwise partial order.

Fibers are identified by exact coordinate equality after canonical rounding
to the 1e-12 grid: the underlying fibers are exact sets, and numerics need a
declared equality radius. Zero-weight entries are dropped on construction
because the support is defined by strict positivity.

WeightMap values are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import DimensionMismatchError, DomainViolationError

__all__ = [
    "Point",
    "CANONICAL_DECIMALS",
    "canonical_key",
    "WeightMap",
    "pullback",
    "pushforward_sup",
    "leq",
    "restrict",
    "add",
    "scale",
]

#: a point of C^n as a tuple of built-in complex scalars
Point = tuple[complex, ...]

#: coordinates are rounded to this many decimals when comparing points
CANONICAL_DECIMALS = 12

#: maps accepted by the transfer operations: any callable Point -> Point
PointMap = Callable[[Point], Point]


def _check_point(p: Sequence[complex]) -> Point:
    q = tuple(complex(c) for c in p)
    if not q:
        raise DomainViolationError("points must have dimension >= 1")
    for c in q:
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise DomainViolationError(f"point coordinates must be finite, got {q!r}")
    return q


def canonical_key(p: Sequence[complex]) -> tuple[tuple[float, float], ...]:
    """Hashable identity of a point under the 1e-12 equality radius."""
    return tuple(
        (round(complex(c).real, CANONICAL_DECIMALS) + 0.0,
         round(complex(c).imag, CANONICAL_DECIMALS) + 0.0)
        for c in p
    )


@dataclass(frozen=True)
class WeightMap:
    """Finite-support weight function: (point, weight) entries, weights > 0.

    Entries are canonically sorted, zero weights are dropped, and points must
    be pairwise distinct after canonical rounding. With ``integer_valued``
    set, every weight must be a positive integer (the Mobius-type families
    are only defined for integer weights).
    """

    entries: tuple[tuple[Point, float], ...]
    integer_valued: bool = False

    def __init__(
        self,
        entries: Iterable[tuple[Sequence[complex], float]],
        integer_valued: bool = False,
    ):
        cleaned: list[tuple[Point, float]] = []
        seen: set = set()
        dim: int | None = None
        for point, weight in entries:
            point = _check_point(point)
            weight = float(weight)
            if not math.isfinite(weight) or weight < 0.0:
                raise DomainViolationError(f"weights must be finite and >= 0, got {weight!r}")
            if weight == 0.0:
                continue  # |p| is defined by strict positivity
            if dim is None:
                dim = len(point)
            elif len(point) != dim:
                raise DimensionMismatchError("all support points must share one dimension")
            if integer_valued and weight != int(weight):
                raise DomainViolationError(
                    f"integer-valued weight map got non-integer weight {weight!r}"
                )
            key = canonical_key(point)
            if key in seen:
                raise DomainViolationError(f"support points must be pairwise distinct: {point!r}")
            seen.add(key)
            cleaned.append((point, weight))
        cleaned.sort(key=lambda e: canonical_key(e[0]))
        object.__setattr__(self, "entries", tuple(cleaned))
        object.__setattr__(self, "integer_valued", bool(integer_valued))

    @property
    def dim(self) -> int | None:
        """Ambient dimension, or None for the empty weight."""
        return len(self.entries[0][0]) if self.entries else None

    @property
    def support(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def weight_at(self, point: Sequence[complex]) -> float:
        """Weight at ``point`` (0.0 off the support)."""
        key = canonical_key(point)
        for p, w in self.entries:
            if canonical_key(p) == key:
                return w
        return 0.0

    def max_weight(self) -> float:
        return max((w for _, w in self.entries), default=0.0)

    @staticmethod
    def single(point: Sequence[complex], weight: float = 1.0,
               integer_valued: bool = False) -> "WeightMap":
        return WeightMap([(tuple(point), weight)], integer_valued=integer_valued)

    @staticmethod
    def indicator(points: Iterable[Sequence[complex]]) -> "WeightMap":
        """Characteristic-function weight of a finite point set."""
        return WeightMap([(tuple(p), 1.0) for p in points], integer_valued=True)


def _check_same_dim(p: WeightMap, q: WeightMap) -> None:
    if p.dim is not None and q.dim is not None and p.dim != q.dim:
        raise DimensionMismatchError(f"weight dimensions differ: {p.dim} vs {q.dim}")


def _apply(F: PointMap, point: Point) -> Point:
    image = F(point)
    return _check_point(image if isinstance(image, tuple) else tuple(image))


def pullback(q: WeightMap, F: PointMap, sample_set: Iterable[Sequence[complex]]) -> WeightMap:
    """Restriction of q o F to a finite sample set.

    Returns the weight map a -> q(F(a)) over the samples with positive
    pulled-back weight. The caller is responsible for supplying every
    preimage it wants represented.
    """
    out = []
    for a in sample_set:
        a = _check_point(a)
        w = q.weight_at(_apply(F, a))
        if w > 0.0:
            out.append((a, w))
    return WeightMap(out, integer_valued=q.integer_valued)


def pushforward_sup(p: WeightMap, F: PointMap) -> WeightMap:
    """Fiberwise-sup image of p under F.

    Support points are grouped by their image (canonical 1e-12 equality);
    each image point receives the max weight over its fiber.
    """
    grouped: dict = {}
    images: dict = {}
    for a, w in p.entries:
        b = _apply(F, a)
        key = canonical_key(b)
        if key not in grouped or w > grouped[key]:
            grouped[key] = w
            images[key] = b
    return WeightMap(
        [(images[k], grouped[k]) for k in grouped],
        integer_valued=p.integer_valued,
    )


def leq(p: WeightMap, q: WeightMap) -> bool:
    """Pointwise order p <= q (absent points count as weight 0)."""
    _check_same_dim(p, q)
    q_by_key = {canonical_key(pt): w for pt, w in q.entries}
    return all(w <= q_by_key.get(canonical_key(pt), 0.0) for pt, w in p.entries)


def restrict(p: WeightMap, points: Iterable[Sequence[complex]]) -> WeightMap:
    """Restriction of p to a point set (intersected with the support)."""
    keep = {canonical_key(pt) for pt in points}
    return WeightMap(
        [(pt, w) for pt, w in p.entries if canonical_key(pt) in keep],
        integer_valued=p.integer_valued,
    )


def add(p: WeightMap, q: WeightMap) -> WeightMap:
    """Pointwise sum p + q."""
    _check_same_dim(p, q)
    acc: dict = {}
    pts: dict = {}
    for source in (p, q):
        for pt, w in source.entries:
            key = canonical_key(pt)
            acc[key] = acc.get(key, 0.0) + w
            pts[key] = pt
    return WeightMap(
        [(pts[k], acc[k]) for k in acc],
        integer_valued=p.integer_valued and q.integer_valued,
    )


def scale(p: WeightMap, factor: float) -> WeightMap:
    """Pointwise multiple factor * p, factor >= 0."""
    if not (factor >= 0.0 and math.isfinite(factor)):
        raise DomainViolationError(f"scale factor must be finite and >= 0, got {factor!r}")
    return WeightMap([(pt, w * factor) for pt, w in p.entries])
