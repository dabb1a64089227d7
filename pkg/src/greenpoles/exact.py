"""Closed-form evaluators for the pole-weighted invariant functions.

Covers the unit disc (weighted Mobius products), polydiscs with collinear or
product-structured pole sets, balanced convex gauge balls through the origin,
monomial Reinhardt domains, Liouville product factors, and the proper-map
transfer calculus. Every evaluator refuses (NoExactFormulaError) outside its
formula's hypotheses instead of silently approximating: exactness is this
module's contract, and callers fall back to the variational estimators.

All functions are pure; results carry a formula id naming the closed form
used.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from . import disc as disc_core
from .domains import (
    CoordinatePower,
    Domain,
    GaugeBall,
    GaugeSpec,
    HoloMapSpec,
    MonomialMap,
    PerCoordinateMobius,
    Polydisc,
    ProductDomain,
    ReinhardtPower,
    Scaled,
    UnitDisc,
    contains,
    flatten_to_polydisc,
    minkowski,
)
from .errors import (
    DimensionMismatchError,
    DomainViolationError,
    JacobianConditionError,
    NoExactFormulaError,
)
from .weights import Point, WeightMap, canonical_key, pushforward_sup

__all__ = [
    "InvariantKind",
    "ExactValue",
    "green_disc",
    "mobius_polydisc_product_poles",
    "green_polydisc_collinear",
    "lempert_polydisc",
    "lempert_balanced_convex",
    "lempert_exact",
    "dmax_eval",
    "green_transfer_proper",
    "dmin_reinhardt",
    "dmin_liouville_product",
    "dmin_countable_pole_example",
    "green_exact",
    "mobius_exact",
    "dmin_exact",
    "evaluate",
]


class InvariantKind(Enum):
    """Which member of the invariant-function roster is being evaluated."""

    MOBIUS_GENERALIZED = "mobius"
    GREEN_GENERALIZED = "green"
    DMIN = "dmin"
    DMAX = "dmax"
    LEMPERT = "lempert"
    CARATHEODORY_MOBIUS = "caratheodory"


@dataclass(frozen=True)
class ExactValue:
    """A closed-form value in [0, 1] plus the id of the formula that produced it."""

    value: float
    formula_id: str

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0) or not math.isfinite(self.value):
            raise DomainViolationError(f"exact values live in [0, 1], got {self.value!r}")
        if not self.formula_id:
            raise DomainViolationError("formula_id must be nonempty")


def _as_scalar(z) -> complex:
    if isinstance(z, tuple):
        if len(z) != 1:
            raise DimensionMismatchError("expected a one-dimensional point")
        return complex(z[0])
    return complex(z)


def _disc_entries(p: WeightMap) -> list[tuple[complex, float]]:
    if p.dim not in (None, 1):
        raise DimensionMismatchError("weight map must live on the unit disc")
    return [(pt[0], w) for pt, w in p.entries]


def _is_origin(z: Point) -> bool:
    return all(c == 0.0 for c in z)


# ---------------------------------------------------------------------------
# disc and polydisc formulas


def green_disc(p: WeightMap, z) -> ExactValue:
    """Green/Mobius/d_min value on the unit disc: the weighted Mobius product.

    One formula serves all three families there; real weights are allowed.
    """
    value = disc_core.weighted_product_disc(_disc_entries(p), _as_scalar(z))
    return ExactValue(value, "disc_weighted_product")


def mobius_polydisc_product_poles(
    pole_sets: Sequence[Sequence[complex]], z: Sequence[complex]
) -> ExactValue:
    """Mobius = Green value of a product pole set A_1 x ... x A_n on the polydisc.

    Equals max_j prod_{a in A_j} m(a, z_j).
    """
    z = tuple(complex(c) for c in z)
    if len(pole_sets) != len(z):
        raise DimensionMismatchError("one pole set per coordinate is required")
    best = 0.0
    for A, zj in zip(pole_sets, z):
        poles = disc_core.validate_disc_weight([(a, 1.0) for a in A])
        if not poles:
            raise DomainViolationError("pole sets must be nonempty")
        prod = 1.0
        for a, _ in poles:
            prod *= disc_core.mobius_distance(a, zj)
        best = max(best, prod)
    return ExactValue(best, "polydisc_product_pole_max")


def _collinear_first_coords(p: WeightMap) -> list[tuple[complex, float]]:
    """Support as (first coordinate, weight), requiring the rest to vanish."""
    out = []
    for pt, w in p.entries:
        if any(c != 0.0 for c in pt[1:]):
            raise DomainViolationError(
                "support must lie on the first coordinate axis for the collinear formula"
            )
        out.append((pt[0], w))
    return out


def green_polydisc_collinear(p: WeightMap, z: Sequence[complex]) -> ExactValue:
    """Green value on E^n for weighted poles on the first coordinate axis.

    With weights sorted descending k_1 >= ... >= k_N (k_{N+1} := 0) the value
    is prod_j u_j^{k_j - k_{j+1}} where u_j is the max of the j-term Mobius
    prefix product at z_1 and the remaining coordinate moduli. For integer
    weights this is also the Mobius-family value. Ties in the sort are broken
    by pole order; tied levels contribute exponent 0, so the value does not
    depend on the tiebreak.
    """
    z = tuple(complex(c) for c in z)
    if p.dim is None:
        for c in z:
            disc_core.check_disc_point(c, "coordinate")
        return ExactValue(1.0, "empty_weight")
    if p.dim != len(z):
        raise DimensionMismatchError("weight and point dimensions differ")
    entries = _collinear_first_coords(p)
    entries.sort(key=lambda e: (-e[1], canonical_key((e[0],))))
    for c in z:
        disc_core.check_disc_point(c, "coordinate")
    rest = max((abs(c) for c in z[1:]), default=0.0)
    prefix = 1.0
    value = 1.0
    for j, (a, k) in enumerate(entries):
        prefix *= disc_core.mobius_distance(a, z[0])
        k_next = entries[j + 1][1] if j + 1 < len(entries) else 0.0
        dk = k - k_next
        if dk > 0.0:
            u = max(prefix, rest)
            if u == 0.0:
                return ExactValue(0.0, "polydisc_collinear_levels")
            value *= u**dk
    return ExactValue(value, "polydisc_collinear_levels")


def lempert_polydisc(a: Sequence[complex], z: Sequence[complex]) -> ExactValue:
    """Lempert function of the polydisc: max_j m(a_j, z_j)."""
    a = tuple(complex(c) for c in a)
    z = tuple(complex(c) for c in z)
    if len(a) != len(z):
        raise DimensionMismatchError("points must share a dimension")
    if not a:
        raise DomainViolationError("points must have dimension >= 1")
    return ExactValue(
        max(disc_core.mobius_distance(aj, zj) for aj, zj in zip(a, z)),
        "polydisc_coordinate_max",
    )


def lempert_balanced_convex(
    gauge: GaugeSpec, a: Sequence[complex], z: Sequence[complex]
) -> ExactValue:
    """Lempert value on a convex balanced gauge ball when one endpoint is 0.

    Equals the gauge of the other endpoint; symmetry in (a, z) holds because
    all invariant functions coincide on convex domains. Rejects when neither
    endpoint is the origin (no closed form is claimed there).
    """
    if not gauge.convex:
        raise NoExactFormulaError("closed form requires a convex gauge")
    a = tuple(complex(c) for c in a)
    z = tuple(complex(c) for c in z)
    for pt, name in ((a, "a"), (z, "z")):
        if not minkowski(gauge, pt) < 1.0:
            raise DomainViolationError(f"{name} lies outside the gauge ball")
    if _is_origin(a) and _is_origin(z):
        return ExactValue(0.0, "balanced_convex_gauge")
    if _is_origin(a):
        return ExactValue(minkowski(gauge, z), "balanced_convex_gauge")
    if _is_origin(z):
        return ExactValue(minkowski(gauge, a), "balanced_convex_gauge")
    raise NoExactFormulaError(
        "balanced convex gauge formula needs one endpoint at the origin; "
        "use the variational estimators"
    )


def lempert_exact(dom: Domain, a: Sequence[complex], z: Sequence[complex]) -> ExactValue:
    """Exact Lempert value where a closed form exists, else NoExactFormulaError."""
    a = dom.check_dim(a)
    z = dom.check_dim(z)
    if not contains(dom, a) or not contains(dom, z):
        raise DomainViolationError("both points must lie in the domain")
    if isinstance(dom, UnitDisc):
        return ExactValue(disc_core.mobius_distance(a[0], z[0]), "disc_mobius")
    if isinstance(dom, Polydisc):
        return lempert_polydisc(a, z)
    if isinstance(dom, GaugeBall):
        if dom.gauge.kind == "max_abs":
            return lempert_polydisc(a, z)
        return lempert_balanced_convex(dom.gauge, a, z)
    if isinstance(dom, Scaled):
        inner = lempert_exact(dom.inner, dom.rescale(a), dom.rescale(z))
        return ExactValue(inner.value, "scaled:" + inner.formula_id)
    if isinstance(dom, ProductDomain):
        al, ar = dom.split(a)
        zl, zr = dom.split(z)
        vl = lempert_exact(dom.left, al, zl)
        vr = lempert_exact(dom.right, ar, zr)
        return ExactValue(max(vl.value, vr.value), "product_factor_max")
    raise NoExactFormulaError(
        f"no exact Lempert formula on {type(dom).__name__}; use the variational estimators"
    )


def dmax_eval(dom: Domain, p: WeightMap, z: Sequence[complex]) -> ExactValue:
    """Maximal-family value: min over the support of Lempert^weight.

    The defining infimum runs over the whole domain, but off-support points
    carry exponent 0 and contribute unit factors (0^0 = 1), so the support
    minimum realizes it; the empty weight gives 1. A pole equal to the
    evaluation point short-circuits to exact 0.
    """
    z = dom.check_dim(z)
    if not p:
        if not contains(dom, z):
            raise DomainViolationError("evaluation point must lie in the domain")
        return ExactValue(1.0, "empty_weight")
    if p.dim != dom.dim:
        raise DimensionMismatchError("weight and domain dimensions differ")
    best = 1.0
    for pole, w in p.entries:
        k = lempert_exact(dom, pole, z).value
        if k == 0.0:
            return ExactValue(0.0, "pole_at_point")
        best = min(best, k**w)
    return ExactValue(best, "dmax_support_min")


# ---------------------------------------------------------------------------
# proper-map transfer


_TRANSFER_PRIMITIVES = (PerCoordinateMobius, CoordinatePower)


def _preimages(chain: Sequence, point: Point) -> list[Point]:
    """All preimages of ``point`` under a transfer-admissible chain."""
    current = [point]
    for stage in reversed(chain):
        nxt: list[Point] = []
        if isinstance(stage, PerCoordinateMobius):
            inv = stage.inverse()
            nxt = [inv.apply(pt) for pt in current]
        else:  # CoordinatePower
            for pt in current:
                per_coord: list[list[complex]] = []
                for c, k in zip(pt, stage.exponents):
                    if k == 1:
                        per_coord.append([c])
                    elif c == 0:
                        per_coord.append([0.0 + 0.0j])
                    else:
                        r = abs(c) ** (1.0 / k)
                        t = cmath.phase(c)
                        per_coord.append(
                            [r * cmath.exp(1j * (t + 2.0 * math.pi * j) / k) for j in range(k)]
                        )
                combos = [()]
                for options in per_coord:
                    combos = [prefix + (c,) for prefix in combos for c in options]
                nxt.extend(combos)
        current = nxt
    return current


def _jacobian_ok(chain: Sequence, preimage: Point) -> bool:
    """Nonvanishing-Jacobian check along the chain at one preimage point."""
    pt = preimage
    for stage in chain:
        if isinstance(stage, CoordinatePower):
            for c, k in zip(pt, stage.exponents):
                if k >= 2 and c == 0:
                    return False
        pt = stage.apply(pt)
    return True


def green_transfer_proper(
    F: HoloMapSpec,
    q: WeightMap,
    z: Sequence[complex],
    source: Domain,
    target: Domain,
) -> ExactValue:
    """Transport a Green value across a proper map with nonvanishing Jacobian.

    The identity g_target(q, F(z)) = g_source(q o F, z) is evaluated on
    whichever side has a closed form. F must be built from per-coordinate
    Mobius and power primitives (the chains whose properness and critical
    sets are checkable); a power map critical at a pole preimage raises
    JacobianConditionError. If neither side is exactly evaluable the identity
    still holds but cannot be priced: NoExactFormulaError reports it.
    """
    if not all(isinstance(s, _TRANSFER_PRIMITIVES) for s in F.chain):
        raise DomainViolationError(
            "transfer accepts per-coordinate Mobius / power chains only"
        )
    z = source.check_dim(z)
    fz = F(z)
    target.check_dim(fz)

    preimage_entries: list[tuple[Point, float]] = []
    for pole, w in q.entries:
        for pre in _preimages(F.chain, pole):
            if not _jacobian_ok(F.chain, pre):
                raise JacobianConditionError(
                    f"power map is critical at pole preimage {pre!r}"
                )
            preimage_entries.append((pre, w))
    q_pullback = WeightMap(preimage_entries, integer_valued=q.integer_valued)

    try:
        forward = green_exact(target, q, fz)
        return ExactValue(forward.value, "proper_transfer:" + forward.formula_id)
    except NoExactFormulaError:
        pass
    try:
        back = green_exact(source, q_pullback, z)
        return ExactValue(back.value, "proper_transfer_pullback:" + back.formula_id)
    except NoExactFormulaError:
        pass
    raise NoExactFormulaError(
        "transfer identity holds: g_target(q, F(z)) = g_source(q o F, z), "
        "but no closed form applies on either side; use the variational estimators"
    )


# ---------------------------------------------------------------------------
# Reinhardt and Liouville-product formulas


def dmin_reinhardt(
    alpha: Sequence[int], p: WeightMap, z: Sequence[complex]
) -> ExactValue:
    """Minimal-family value on {|z^alpha| < 1} for relatively prime exponents.

    Every disc-valued holomorphic function there factors through z -> z^alpha,
    so the value is the disc value of the fiberwise-sup pushforward at
    z^alpha.
    """
    dom = ReinhardtPower(tuple(int(a) for a in alpha))
    z = dom.check_dim(z)
    if not contains(dom, z):
        raise DomainViolationError("evaluation point must lie in the domain")
    if not p:
        return ExactValue(1.0, "empty_weight")
    if p.dim != dom.dim:
        raise DimensionMismatchError("weight and domain dimensions differ")
    for pole, _ in p.entries:
        if not contains(dom, pole):
            raise DomainViolationError(f"pole {pole!r} lies outside the domain")
    push = pushforward_sup(p, HoloMapSpec((MonomialMap(dom.alpha),)))
    value = disc_core.weighted_product_disc(_disc_entries(push), dom.monomial(z))
    return ExactValue(value, "reinhardt_monomial_pushforward")


def dmin_liouville_product(
    p: WeightMap, z: complex, w: Sequence[complex]
) -> ExactValue:
    """Minimal-family value on E x C^m: the plane factor collapses.

    Weights are collapsed onto the disc coordinate with a fiberwise sup and
    evaluated there; the plane coordinates w never enter the value.
    """
    z = disc_core.check_disc_point(_as_scalar(z), "z")
    w = tuple(complex(c) for c in w)
    if not w:
        raise DimensionMismatchError("the plane factor must have dimension >= 1")
    for c in w:
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise DomainViolationError("plane coordinates must be finite")
    if not p:
        return ExactValue(1.0, "empty_weight")
    if p.dim != 1 + len(w):
        raise DimensionMismatchError("weight dimension must be 1 + plane dimension")
    collapsed = pushforward_sup(p, lambda pt: (pt[0],))
    value = disc_core.weighted_product_disc(_disc_entries(collapsed), z)
    return ExactValue(value, "liouville_factor_collapse")


def dmin_countable_pole_example(z: complex, tol: float = 1e-9) -> ExactValue:
    """The discrete countable-pole example on E x C.

    Poles 1/k (k >= 2) on the disc axis with weights 1/k^2 collapse to the
    infinite product prod_{k>=2} m(1/k, z)^{1/k^2}, truncated with certified
    integral tail enclosures. The value is discontinuous at z = 0, which is
    what makes the example interesting.
    """
    z = disc_core.check_disc_point(_as_scalar(z), "z")

    def factors():
        k = 2
        while True:
            yield disc_core.mobius_distance(1.0 / k, z), 1.0 / (k * k)
            k += 1

    if z == 0:
        # factor moduli are 1/j: remaining log mass is sum_{j>k} ln j / j^2,
        # enclosed by integrals of the decreasing integrand ln x / x^2
        def tail(count: int) -> tuple[float, float]:
            k = count + 1  # largest consumed index
            return (
                (math.log(k + 1) + 1.0) / (k + 1),
                (math.log(k) + 1.0) / k,
            )

    else:
        mod = abs(z)
        a_main = -math.log(mod)
        corr = (mod + 1.0 / mod)
        j0 = max(8, math.ceil(2.0 / mod))

        def tail(count: int) -> tuple[float, float]:
            k = count + 1
            if k < j0:
                return (0.0, math.inf)
            # -log m(1/j, z) = -log|z| - log|1 - 1/(jz)| + log|1 - z/j|;
            # corrections are bounded by 2(|z| + 1/|z|)/j^3 for j > k >= j0
            b = corr / (k * k)
            return (max(0.0, a_main / (k + 1) - b), a_main / k + b)

    value = disc_core.truncated_infinite_product(factors(), tol, tail)
    return ExactValue(min(1.0, value), "countable_axis_product")


# ---------------------------------------------------------------------------
# dispatchers


def _single_pole(p: WeightMap) -> tuple[Point, float] | None:
    return p.entries[0] if len(p) == 1 else None


def _product_structure(p: WeightMap) -> list[list[complex]] | None:
    """A_j coordinate sets if the support is their full product with unit weights."""
    if not p or any(w != 1.0 for _, w in p.entries):
        return None
    n = p.dim
    axes: list[dict] = [dict() for _ in range(n)]
    for pt, _ in p.entries:
        for j, c in enumerate(pt):
            axes[j][canonical_key((c,))] = c
    count = 1
    for ax in axes:
        count *= len(ax)
    if count != len(p):
        return None
    keys = {canonical_key(pt) for pt, _ in p.entries}
    combos = [()]
    for ax in axes:
        combos = [prefix + (c,) for prefix in combos for c in ax.values()]
    if any(canonical_key(c) not in keys for c in combos):
        return None
    return [list(ax.values()) for ax in axes]


def _is_collinear(p: WeightMap) -> bool:
    return all(all(c == 0.0 for c in pt[1:]) for pt, _ in p.entries)


def _rescaled(p: WeightMap, r: float) -> WeightMap:
    return WeightMap(
        [(tuple(c / r for c in pt), w) for pt, w in p.entries],
        integer_valued=p.integer_valued,
    )


def _green_polydisc(p: WeightMap, z: Point) -> ExactValue:
    if _is_collinear(p):
        return green_polydisc_collinear(p, z)
    single = _single_pole(p)
    if single is not None:
        pole, k = single
        base = lempert_polydisc(pole, z).value
        return ExactValue(base**k, "polydisc_single_pole")
    sets = _product_structure(p)
    if sets is not None:
        return mobius_polydisc_product_poles(sets, z)
    raise NoExactFormulaError(
        "no exact polydisc Green formula for this pole configuration; "
        "use the variational estimators"
    )


def _check_weight_in_domain(dom: Domain, p: WeightMap) -> None:
    if p and p.dim != dom.dim:
        raise DimensionMismatchError("weight and domain dimensions differ")
    for pole, _ in p.entries:
        if not contains(dom, pole):
            raise DomainViolationError(f"pole {pole!r} lies outside the domain")


def green_exact(dom: Domain, p: WeightMap, z: Sequence[complex]) -> ExactValue:
    """Exact generalized Green value where a formula exists."""
    z = dom.check_dim(z)
    if not contains(dom, z):
        raise DomainViolationError("evaluation point must lie in the domain")
    _check_weight_in_domain(dom, p)
    if not p:
        return ExactValue(1.0, "empty_weight")
    if isinstance(dom, UnitDisc):
        return green_disc(p, z)
    if isinstance(dom, Scaled):
        inner = green_exact(dom.inner, _rescaled(p, dom.r), dom.rescale(z))
        return ExactValue(inner.value, "scaled:" + inner.formula_id)
    n = flatten_to_polydisc(dom)
    if n is not None:
        return _green_polydisc(p, z)
    raise NoExactFormulaError(
        f"no exact Green formula on {type(dom).__name__}; use the variational estimators"
    )


def _require_integer_weights(p: WeightMap) -> None:
    if any(w != int(w) for _, w in p.entries):
        raise DomainViolationError("Mobius-type families are defined for integer weights")


def mobius_exact(dom: Domain, p: WeightMap, z: Sequence[complex]) -> ExactValue:
    """Exact generalized Mobius value; integer weights required.

    On the disc and on polydiscs with collinear, single-pole, or product
    pole structure the Mobius and Green values coincide.
    """
    _require_integer_weights(p)
    return green_exact(dom, p, z)


def dmin_exact(dom: Domain, p: WeightMap, z: Sequence[complex]) -> ExactValue:
    """Exact minimal-family value (disc, scaled disc, Reinhardt power)."""
    z = dom.check_dim(z)
    if not contains(dom, z):
        raise DomainViolationError("evaluation point must lie in the domain")
    _check_weight_in_domain(dom, p)
    if not p:
        return ExactValue(1.0, "empty_weight")
    if isinstance(dom, UnitDisc):
        return green_disc(p, z)
    if isinstance(dom, ReinhardtPower):
        return dmin_reinhardt(dom.alpha, p, z)
    if isinstance(dom, Scaled):
        inner = dmin_exact(dom.inner, _rescaled(p, dom.r), dom.rescale(z))
        return ExactValue(inner.value, "scaled:" + inner.formula_id)
    raise NoExactFormulaError(
        f"no exact minimal-family formula on {type(dom).__name__}; "
        "use the variational estimators"
    )


def evaluate(
    kind: InvariantKind, dom: Domain, p: WeightMap, z: Sequence[complex]
) -> ExactValue:
    """Uniform exact-evaluation entry point (used by the CLI)."""
    if kind is InvariantKind.GREEN_GENERALIZED:
        return green_exact(dom, p, z)
    if kind is InvariantKind.MOBIUS_GENERALIZED:
        return mobius_exact(dom, p, z)
    if kind is InvariantKind.DMIN:
        return dmin_exact(dom, p, z)
    if kind is InvariantKind.DMAX:
        return dmax_eval(dom, p, z)
    if kind in (InvariantKind.LEMPERT, InvariantKind.CARATHEODORY_MOBIUS):
        single = _single_pole(p)
        if single is None:
            raise DomainViolationError(
                "two-point invariants need a single-pole weight naming the first point"
            )
        # on every domain with an exact formula here the two families agree
        return lempert_exact(dom, single[0], z)
    raise DomainViolationError(f"unknown invariant kind {kind!r}")
