"""Certified variational bounds where no closed form exists.

Lower bounds for the minimal family come from structured competitor maps
into the disc (gauge-normalized functional, optional Blaschke factors, and a
final Mobius factor vanishing at the query point); every candidate is an
admissible competitor, so every reported value is a true lower bound. Upper
bounds for the Lempert/maximal family and the two-pole Coman function come
from polynomial analytic discs whose target-domain validity is certified by
boundary sampling with a margin; every certified disc is an admissible
competitor, so every reported value is a true upper bound.

Searches are deterministic: restart start points are drawn up front from a
seeded generator, the simplex descent itself consumes no randomness, and
results merge by restart order (a parallel evaluation of the independent
restarts would reduce to the same answer).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import exact
from ._kernels import poly_eval_many
from .domains import (
    Affine,
    AnalyticDisc,
    Domain,
    GaugeBall,
    HoloMapSpec,
    PerCoordinateMobius,
    Polydisc,
    ProductDomain,
    ReinhardtPower,
    Scaled,
    UnitDisc,
    boundary_samples_for_degree,
    contains,
    disc_validity,
    flatten_to_polydisc,
)
from .errors import (
    DomainViolationError,
    InvariantViolationError,
    SearchBudgetError,
)
from .weights import Point, WeightMap, canonical_key

__all__ = [
    "SearchConfig",
    "CandidateMap",
    "BoundInterval",
    "score_candidate",
    "dmin_lower_bound",
    "lempert_upper_bound",
    "dmax_upper_bound",
    "coman_upper_bound",
    "sandwich",
]

#: near-collision radius triggering the conservative cluster re-score; exact
#: fibers use the 1e-12 canonical rounding of the weight calculus
CLUSTER_RADIUS = 1e-6

_SEED_MARGIN = 1e-7  # certification margin used by the constructive seed discs


@dataclass(frozen=True)
class SearchConfig:
    """Deterministic search budget; identical configs give identical results."""

    seed: int = 0
    restarts: int = 16
    max_evals: int = 240
    blaschke_degree_max: int = 3
    disc_degree_max: int = 4
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.seed < 0:
            raise DomainViolationError("seed must be nonnegative")
        for name in ("restarts", "max_evals", "blaschke_degree_max", "disc_degree_max"):
            if getattr(self, name) < 1:
                raise DomainViolationError(f"{name} must be positive")
        if not (self.tolerance > 0.0 and math.isfinite(self.tolerance)):
            raise DomainViolationError("tolerance must be positive")


@dataclass(frozen=True)
class CandidateMap:
    """Competitor map domain -> E: functional, Blaschke factors, final Mobius.

    ``functional`` is one of ("identity",), ("proj", i), ("monomial", exponents),
    ("linear", coefficients); coefficients are stored already normalized so the
    functional maps the open domain into E. The final Mobius factor subtracts
    ``post_center`` so the map vanishes at the query point.
    """

    functional: tuple
    blaschke_zeros: tuple[complex, ...] = ()
    post_center: complex = 0.0 + 0.0j

    def raw(self, point: Sequence[complex]) -> complex:
        kind = self.functional[0]
        if kind == "identity":
            u = complex(point[0])
        elif kind == "proj":
            u = complex(point[self.functional[1]])
        elif kind == "monomial":
            u = 1.0 + 0.0j
            for c, b in zip(point, self.functional[1]):
                u *= complex(c) ** b
        elif kind == "linear":
            u = sum(w * complex(c) for w, c in zip(self.functional[1], point))
        else:
            raise DomainViolationError(f"unknown functional {self.functional!r}")
        for b in self.blaschke_zeros:
            u = (u - b) / (1.0 - b.conjugate() * u)
        return u

    def __call__(self, point: Sequence[complex]) -> complex:
        u = self.raw(point)
        c = self.post_center
        return (u - c) / (1.0 - c.conjugate() * u)

    def describe(self) -> dict:
        if self.functional[0] == "linear":
            func = ["linear", [_c2pair(c) for c in self.functional[1]]]
        elif self.functional[0] == "monomial":
            func = ["monomial", list(self.functional[1])]
        elif self.functional[0] == "proj":
            func = ["proj", self.functional[1]]
        else:
            func = ["identity"]
        return {
            "functional": func,
            "blaschke_zeros": [_c2pair(b) for b in self.blaschke_zeros],
            "post_center": _c2pair(self.post_center),
        }


def _c2pair(c: complex) -> list[float]:
    return [complex(c).real, complex(c).imag]


@dataclass(frozen=True)
class BoundInterval:
    """Certified enclosure 0 <= lower <= upper <= 1 with optional witnesses.

    ``upper_frame`` records a domain automorphism when the witness disc lives
    in normalized coordinates (the original-frame disc is frame o witness).
    """

    lower: float
    upper: float
    lower_witness: CandidateMap | None = None
    upper_witness: AnalyticDisc | None = None
    upper_frame: HoloMapSpec | None = None
    note: str | None = None

    def __post_init__(self):
        ok = (
            math.isfinite(self.lower)
            and math.isfinite(self.upper)
            and 0.0 <= self.lower <= self.upper <= 1.0
        )
        if not ok:
            raise InvariantViolationError(
                f"bound interval must satisfy 0 <= lower <= upper <= 1, "
                f"got [{self.lower!r}, {self.upper!r}]"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower


# ---------------------------------------------------------------------------
# d_min lower bounds


def score_candidate(cand: CandidateMap, p: WeightMap, z: Sequence[complex]) -> float:
    """True competitor value of a candidate map at the query point.

    Images of the support are grouped into exact fibers (1e-12 radius, sup
    weight per fiber); fibers within the 1e-6 near-collision radius are
    re-scored with every factor raised to the cluster's max weight, which
    never overstates the candidate's exact value whether or not the fibers
    truly coincide.
    """
    fibers: dict = {}
    for pole, w in p.entries:
        mu = cand(pole)
        if abs(mu) == 0.0:
            return 0.0
        key = canonical_key((mu,))
        if key in fibers:
            old_mu, old_w = fibers[key]
            fibers[key] = (old_mu, max(old_w, w))
        else:
            fibers[key] = (mu, w)
    items = sorted(fibers.values(), key=lambda t: (t[0].real, t[0].imag))
    n = len(items)
    # transitive clustering of near-collisions
    cluster_id = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(items[i][0] - items[j][0]) <= CLUSTER_RADIUS:
                root = cluster_id[i]
                for k in range(n):
                    if cluster_id[k] == cluster_id[j]:
                        cluster_id[k] = root
    score = 1.0
    for cid in set(cluster_id):
        members = [items[k] for k in range(n) if cluster_id[k] == cid]
        w_max = max(w for _, w in members)
        for mu, _ in members:
            score *= abs(mu) ** w_max
    return score


def _linear_normalizer(dom: Domain) -> str | None:
    """Dual normalization rule making sum-functionals map the domain into E."""
    if flatten_to_polydisc(dom) is not None:
        return "sum_abs"
    if isinstance(dom, GaugeBall):
        return "max_abs"  # for both the abs-sum and abs-plus-sqrt balls
    return None


def _normalize_linear(coeffs: tuple[complex, ...], rule: str) -> tuple[complex, ...]:
    if rule == "sum_abs":
        norm = math.fsum(abs(c) for c in coeffs)
    else:
        norm = max(abs(c) for c in coeffs)
    if norm > 1.0:
        coeffs = tuple(c / norm for c in coeffs)
    return coeffs


def _functional_pool(dom: Domain) -> tuple[list[tuple], str | None]:
    """Discrete functional seeds plus the linear-family normalizer (if any)."""
    n = dom.dim
    if isinstance(dom, UnitDisc) or (flatten_to_polydisc(dom) == 1):
        return [("identity",)], None
    if isinstance(dom, ReinhardtPower):
        return [("monomial", dom.alpha)], None
    pool: list[tuple] = [("proj", i) for i in range(n)]
    for total in (2,):
        for beta in _compositions(n, total):
            pool.append(("monomial", beta))
    rule = _linear_normalizer(dom)
    return pool, rule


def _compositions(n: int, total: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _compositions(n - 1, total - first):
            out.append((first,) + rest)
    return out


def _disc_point_from_plane(x: float, y: float) -> complex:
    w = complex(x, y)
    return w / math.sqrt(1.0 + abs(w) ** 2)


def _build_candidate(
    functional_kind: tuple,
    rule: str | None,
    params: np.ndarray,
    n: int,
    n_zeros: int,
    z: Point,
) -> CandidateMap:
    idx = 0
    if functional_kind[0] == "linear":
        coeffs = tuple(
            complex(params[idx + 2 * i], params[idx + 2 * i + 1]) for i in range(n)
        )
        idx += 2 * n
        if all(c == 0 for c in coeffs):
            coeffs = (1.0 + 0.0j,) + (0.0 + 0.0j,) * (n - 1)
        functional = ("linear", _normalize_linear(coeffs, rule or "sum_abs"))
    else:
        functional = functional_kind
    zeros = tuple(
        _disc_point_from_plane(params[idx + 2 * i], params[idx + 2 * i + 1])
        for i in range(n_zeros)
    )
    base = CandidateMap(functional, zeros, 0.0 + 0.0j)
    return CandidateMap(functional, zeros, base.raw(z))


def dmin_lower_bound(
    dom: Domain, p: WeightMap, z: Sequence[complex], cfg: SearchConfig
) -> BoundInterval:
    """Certified lower bound for the minimal family via competitor search.

    Every evaluated candidate maps the domain into E and vanishes at z, so
    the best score is a true lower bound; the trivial upper bound 1 completes
    the interval. Deterministic in cfg.seed; more restarts can only improve
    the bound under the same seed stream.
    """
    z = dom.check_dim(z)
    if not contains(dom, z):
        raise DomainViolationError("evaluation point must lie in the domain")
    exact._check_weight_in_domain(dom, p)
    if not p:
        return BoundInterval(1.0, 1.0, note="empty weight")
    if isinstance(dom, Scaled):
        inner = dmin_lower_bound(
            dom.inner, exact._rescaled(p, dom.r), dom.rescale(z), cfg
        )
        return BoundInterval(inner.lower, 1.0, lower_witness=inner.lower_witness,
                             note="scaled reparametrization")
    if any(canonical_key(pole) == canonical_key(z) for pole, _ in p.entries):
        return BoundInterval(0.0, 0.0, note="pole at evaluation point")

    pool, rule = _functional_pool(dom)
    if isinstance(dom, ProductDomain) and flatten_to_polydisc(dom) is None:
        pool = _product_pool(dom)
        rule = None
    n = dom.dim

    best = -1.0
    best_cand: CandidateMap | None = None

    def consider(cand: CandidateMap) -> float:
        nonlocal best, best_cand
        s = score_candidate(cand, p, z)
        if s > best:
            best, best_cand = s, cand
        return s

    # exact seeds: each discrete functional with no Blaschke factor
    for functional in pool:
        consider(_build_candidate(functional, rule, np.empty(0), n, 0, z))

    specs = list(pool) + ([("linear",)] if rule is not None else [])
    rng = np.random.default_rng(cfg.seed)
    for r in range(cfg.restarts):
        functional_kind = specs[r % len(specs)]
        n_zeros = (r // len(specs)) % (cfg.blaschke_degree_max + 1)
        n_lin = 2 * n if functional_kind[0] == "linear" else 0
        x0 = rng.normal(0.0, 0.8, n_lin + 2 * n_zeros)
        if x0.size == 0:
            continue  # already covered by the exact seeds

        def objective(x: np.ndarray) -> float:
            cand = _build_candidate(functional_kind, rule, x, n, n_zeros, z)
            return -score_candidate(cand, p, z)

        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxfev": cfg.max_evals, "xatol": 1e-10, "fatol": 1e-14},
        )
        consider(_build_candidate(functional_kind, rule, res.x, n, n_zeros, z))

    note = None if best > 0.0 else "no candidate scored above zero"
    return BoundInterval(max(best, 0.0), 1.0, lower_witness=best_cand, note=note)


def _product_pool(dom: ProductDomain) -> list[tuple]:
    """Functionals of a non-polydisc product: factor functionals on blocks."""
    pool: list[tuple] = []
    offset = 0
    for factor in (dom.left, dom.right):
        sub, _ = _functional_pool(factor)
        for f in sub:
            if f[0] == "identity":
                pool.append(("proj", offset))
            elif f[0] == "proj":
                pool.append(("proj", offset + f[1]))
            elif f[0] == "monomial":
                beta = (0,) * offset + f[1] + (0,) * (dom.dim - offset - len(f[1]))
                pool.append(("monomial", beta))
        offset += factor.dim
    return pool


# ---------------------------------------------------------------------------
# disc-based upper bounds


def _gauge_array(dom: Domain, vals: np.ndarray) -> np.ndarray:
    """Vectorized membership functional on an (n, M) coordinate array."""
    if isinstance(dom, UnitDisc):
        return np.abs(vals[0])
    if isinstance(dom, Polydisc):
        return np.max(np.abs(vals), axis=0)
    if isinstance(dom, GaugeBall):
        a = np.abs(vals)
        if dom.gauge.kind == "max_abs":
            return np.max(a, axis=0)
        if dom.gauge.kind == "abs_sum":
            return np.sum(a, axis=0)
        s = 0.5 * (np.sqrt(a[1]) + np.sqrt(a[1] + 4.0 * a[0]))
        return s * s
    if isinstance(dom, ReinhardtPower):
        mono = np.ones(vals.shape[1], dtype=np.complex128)
        for j, k in enumerate(dom.alpha):
            mono = mono * vals[j] ** k
        return np.abs(mono)
    if isinstance(dom, ProductDomain):
        nl = dom.left.dim
        return np.maximum(
            _gauge_array(dom.left, vals[:nl]), _gauge_array(dom.right, vals[nl:])
        )
    if isinstance(dom, Scaled):
        return _gauge_array(dom.inner, vals / dom.r)
    raise DomainViolationError(f"no vectorized gauge for {type(dom).__name__}")


_LAMBDA_CACHE: dict[int, np.ndarray] = {}


def _boundary_lambdas(degree: int) -> np.ndarray:
    n = boundary_samples_for_degree(degree)
    lams = _LAMBDA_CACHE.get(n)
    if lams is None:
        lams = np.exp(2j * np.pi * np.arange(n) / n)
        _LAMBDA_CACHE[n] = lams
    return lams


def _max_boundary_gauge(coeffs: np.ndarray, dom: Domain) -> float:
    vals = poly_eval_many(coeffs, _boundary_lambdas(coeffs.shape[1] - 1))
    return float(np.max(_gauge_array(dom, vals)))


def _certified(coeffs: np.ndarray, dom: Domain, margin: float) -> bool:
    return _max_boundary_gauge(coeffs, dom) <= 1.0 - margin


def _normalized_polydisc_bound(
    n: int, dom: Domain, a: Point, z: Point, margin: float
) -> BoundInterval:
    """Affine geodesic disc in the frame where a sits at the origin."""
    mob = PerCoordinateMobius(tuple((aj, 0.0) for aj in a))
    w = mob.apply(z)
    r = max(abs(c) for c in w)
    if r == 0.0:
        return BoundInterval(0.0, 0.0, upper_witness=AnalyticDisc.constant(a))
    mu = r / (1.0 - 2.0 * margin)
    if mu >= 1.0:
        mu = 0.5 * (r + 1.0)
    disc = AnalyticDisc(tuple((0.0 + 0.0j, wj / mu) for wj in w))
    frame = HoloMapSpec((mob.inverse(),))
    eff_margin = min(margin, 0.5 * (1.0 - r / mu))
    if not disc_validity(disc, Polydisc(n), eff_margin):
        raise SearchBudgetError("normalized geodesic disc failed certification")
    return BoundInterval(0.0, mu, upper_witness=disc, upper_frame=frame,
                         note="normalized affine geodesic")


def _balanced_linear_bound(
    dom: Domain, base_is_a: bool, v: Point, margin: float
) -> BoundInterval:
    """Linear disc through the origin of a balanced domain."""
    h = dom.gauge_value(v)
    if h == 0.0:
        return BoundInterval(0.0, 0.0, upper_witness=AnalyticDisc.constant(v))
    mu = h / (1.0 - 2.0 * margin)
    if mu >= 1.0:
        mu = 0.5 * (h + 1.0)
    disc = AnalyticDisc(tuple((0.0 + 0.0j, vj / mu) for vj in v))
    eff_margin = min(margin, 0.5 * (1.0 - h / mu))
    if not disc_validity(disc, dom, eff_margin):
        raise SearchBudgetError("linear disc failed certification")
    note = "linear disc through origin" + ("" if base_is_a else "; endpoints swapped")
    return BoundInterval(0.0, mu, upper_witness=disc, note=note)


def _disc_coeffs_from_params(
    a: Point, z: Point, mu: float, free: np.ndarray, degree: int
) -> np.ndarray:
    """phi(lam) = a + lam psi(lam) with psi(mu) = (z - a)/mu eliminated exactly."""
    n = len(a)
    n_free = degree - 1  # psi coefficients c_1 .. c_{degree-1}
    coeffs = np.zeros((n, degree + 1), dtype=np.complex128)
    for j in range(n):
        cs = [complex(free[2 * (j * n_free + k)], free[2 * (j * n_free + k) + 1])
              for k in range(n_free)]
        c0 = (z[j] - a[j]) / mu - sum(c * mu ** (k + 1) for k, c in enumerate(cs))
        coeffs[j, 0] = a[j]
        coeffs[j, 1] = c0
        for k, c in enumerate(cs):
            coeffs[j, 2 + k] = c
    return coeffs


def lempert_upper_bound(
    dom: Domain, a: Sequence[complex], z: Sequence[complex], cfg: SearchConfig
) -> BoundInterval:
    """Certified upper bound for the Lempert function via analytic discs.

    Interpolation (phi(0) = a, phi(mu) = z) is enforced analytically before
    the search, so only gauge validity needs checking; the reported value is
    the smallest certified |mu|.
    """
    a = dom.check_dim(a)
    z = dom.check_dim(z)
    if not contains(dom, a) or not contains(dom, z):
        raise DomainViolationError("both points must lie in the domain")
    if a == z:
        return BoundInterval(0.0, 0.0, upper_witness=AnalyticDisc.constant(a))

    if isinstance(dom, Scaled):
        inner = lempert_upper_bound(dom.inner, dom.rescale(a), dom.rescale(z), cfg)
        scale_stage = Affine(
            tuple(tuple((dom.r if i == j else 0.0) + 0.0j for j in range(dom.dim))
                  for i in range(dom.dim)),
            (0.0 + 0.0j,) * dom.dim,
        )
        inner_chain = inner.upper_frame.chain if inner.upper_frame is not None else ()
        frame = HoloMapSpec(inner_chain + (scale_stage,))
        return BoundInterval(0.0, inner.upper, upper_witness=inner.upper_witness,
                             upper_frame=frame, note="scaled reparametrization")

    n_flat = flatten_to_polydisc(dom)
    if n_flat is not None:
        return _normalized_polydisc_bound(n_flat, dom, a, z, _SEED_MARGIN)

    if isinstance(dom, GaugeBall):
        if all(c == 0.0 for c in a):
            return _balanced_linear_bound(dom, True, z, _SEED_MARGIN)
        if all(c == 0.0 for c in z):
            return _balanced_linear_bound(dom, False, a, _SEED_MARGIN)

    if isinstance(dom, ProductDomain):
        zl_a, zr_a = dom.split(a)
        zl_z, zr_z = dom.split(z)
        bl = lempert_upper_bound(dom.left, zl_a, zl_z, cfg)
        br = lempert_upper_bound(dom.right, zr_a, zr_z, cfg)
        return BoundInterval(0.0, max(bl.upper, br.upper),
                             note="factor-wise product bound")

    return _searched_disc_bound(dom, a, z, cfg)


def _searched_disc_bound(
    dom: Domain, a: Point, z: Point, cfg: SearchConfig
) -> BoundInterval:
    """General simplex search over interpolating polynomial discs."""
    margin = 1e-6
    degree = max(2, cfg.disc_degree_max)
    n = dom.dim
    n_free = 2 * n * (degree - 1)
    best_mu = math.inf
    best: tuple[np.ndarray, Point] | None = None

    def try_params(base: Point, target: Point, mu: float, free: np.ndarray):
        nonlocal best_mu, best
        coeffs = _disc_coeffs_from_params(base, target, mu, free, degree)
        if _certified(coeffs, dom, margin) and mu < best_mu:
            best_mu, best = mu, (coeffs, base)

    for orientation, (base, target) in enumerate(((a, z), (z, a))):
        # one stream per orientation keeps restart prefixes stable, so a
        # larger restart budget can only improve the bound
        rng = np.random.default_rng([cfg.seed, orientation])
        for mu0 in (0.35, 0.65, 0.9):
            try_params(base, target, mu0, np.zeros(n_free))
        for r in range(cfg.restarts):
            x0 = np.concatenate([[rng.normal()], rng.normal(0.0, 0.3, n_free)])

            def objective(x: np.ndarray) -> float:
                mu = 1.0 / (1.0 + math.exp(-float(x[0])))
                if mu < 1e-6:
                    return 2.0
                coeffs = _disc_coeffs_from_params(base, target, mu, x[1:], degree)
                excess = _max_boundary_gauge(coeffs, dom) - (1.0 - margin)
                return mu + 10.0 * max(0.0, excess)

            res = minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={"maxfev": cfg.max_evals, "xatol": 1e-10, "fatol": 1e-14},
            )
            mu = 1.0 / (1.0 + math.exp(-float(res.x[0])))
            if mu >= 1e-6:
                try_params(base, target, mu, res.x[1:])

    if best is None:
        raise SearchBudgetError("no certified interpolating disc found within budget")
    coeffs, base = best
    disc = AnalyticDisc(tuple(tuple(row) for row in coeffs))
    note = None if base == a else "endpoints swapped"
    return BoundInterval(0.0, min(best_mu, 1.0), upper_witness=disc, note=note)


def dmax_upper_bound(
    dom: Domain, p: WeightMap, z: Sequence[complex], cfg: SearchConfig
) -> BoundInterval:
    """Upper bound for the maximal family: exact value when available, else
    the support minimum of certified Lempert upper bounds raised to the
    weights."""
    z = dom.check_dim(z)
    if not p:
        if not contains(dom, z):
            raise DomainViolationError("evaluation point must lie in the domain")
        return BoundInterval(1.0, 1.0, note="empty weight")
    try:
        val = exact.dmax_eval(dom, p, z)
        return BoundInterval(val.value, val.value, note=f"exact:{val.formula_id}")
    except exact.NoExactFormulaError:
        pass
    best = 1.0
    witness = None
    frame = None
    for pole, w in p.entries:
        if canonical_key(pole) == canonical_key(z):
            return BoundInterval(0.0, 0.0, note="pole at evaluation point")
        b = lempert_upper_bound(dom, pole, z, cfg)
        v = min(1.0, b.upper**w)
        if v < best:
            best, witness, frame = v, b.upper_witness, b.upper_frame
    return BoundInterval(0.0, best, upper_witness=witness, upper_frame=frame)


def coman_upper_bound(
    dom: Domain,
    poles: tuple[Sequence[complex], Sequence[complex]],
    z: Sequence[complex],
    cfg: SearchConfig,
) -> float:
    """Certified upper bound for the two-pole Coman function.

    Minimizes |mu_1 mu_2| over certified polynomial discs phi with phi(0) = z,
    phi(mu_1) and phi(mu_2) at the poles; the two-point interpolation is
    eliminated analytically, so every iterate interpolates exactly.
    """
    p1 = dom.check_dim(poles[0])
    p2 = dom.check_dim(poles[1])
    z = dom.check_dim(z)
    for pt in (p1, p2, z):
        if not contains(dom, pt):
            raise DomainViolationError("all points must lie in the domain")
    if canonical_key(p1) == canonical_key(p2):
        raise DomainViolationError("the two poles must be distinct")
    if canonical_key(z) in (canonical_key(p1), canonical_key(p2)):
        other = p2 if canonical_key(z) == canonical_key(p1) else p1
        lempert_upper_bound(dom, z, other, cfg)  # certify a disc exists
        return 0.0

    margin = _SEED_MARGIN
    degree = max(2, cfg.disc_degree_max)
    n = dom.dim
    n_extra = degree - 2  # psi coefficients c_2 .. c_{degree-1} are free
    best = math.inf

    def solve_and_check(mu1: complex, mu2: complex, free: np.ndarray) -> float | None:
        if abs(mu1) >= 1.0 or abs(mu2) >= 1.0 or abs(mu1 - mu2) < 1e-8:
            return None
        coeffs = np.zeros((n, degree + 1), dtype=np.complex128)
        for j in range(n):
            cs = [complex(free[2 * (j * n_extra + k)], free[2 * (j * n_extra + k) + 1])
                  for k in range(n_extra)]
            t1 = (p1[j] - z[j]) / mu1 - sum(c * mu1 ** (k + 2) for k, c in enumerate(cs))
            t2 = (p2[j] - z[j]) / mu2 - sum(c * mu2 ** (k + 2) for k, c in enumerate(cs))
            c1 = (t1 - t2) / (mu1 - mu2)
            c0 = t1 - c1 * mu1
            coeffs[j, 0] = z[j]
            coeffs[j, 1] = c0
            coeffs[j, 2] = c1
            for k, c in enumerate(cs):
                coeffs[j, 3 + k] = c
        if _certified(coeffs, dom, margin):
            return abs(mu1 * mu2)
        return None

    no_extra = np.zeros(2 * n * n_extra)
    for s in [0.05 * k for k in range(1, 20)]:
        for mu1, mu2 in (((s + 0j), (-s + 0j)), ((s + 0j), (s * 1j))):
            got = solve_and_check(mu1, mu2, no_extra)
            if got is not None:
                best = min(best, got)

    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.restarts):
        x0 = np.concatenate([rng.normal(0.0, 0.6, 4), rng.normal(0.0, 0.3, no_extra.size)])

        def objective(x: np.ndarray) -> float:
            mu1 = _disc_point_from_plane(x[0], x[1])
            mu2 = _disc_point_from_plane(x[2], x[3])
            if abs(mu1 - mu2) < 1e-8:
                return 3.0
            coeffs_val = solve_and_check(mu1, mu2, x[4:])
            if coeffs_val is not None:
                return coeffs_val
            return 2.0 + abs(mu1 * mu2)

        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxfev": cfg.max_evals, "xatol": 1e-10, "fatol": 1e-14},
        )
        mu1 = _disc_point_from_plane(res.x[0], res.x[1])
        mu2 = _disc_point_from_plane(res.x[2], res.x[3])
        got = solve_and_check(mu1, mu2, res.x[4:])
        if got is not None:
            best = min(best, got)

    if not math.isfinite(best):
        raise SearchBudgetError("no certified three-point disc found within budget")
    return best


# ---------------------------------------------------------------------------
# interval aggregation


def sandwich(
    dom: Domain, p: WeightMap, z: Sequence[complex], cfg: SearchConfig
) -> BoundInterval:
    """Enclosure of the generalized Green value from the extremal families.

    Uses the exact Green formula when one applies (degenerate interval);
    otherwise the minimal family bounds from below and the maximal family
    from above. An inversion beyond cfg.tolerance is a hard error because the
    ordering of the families is a theorem.
    """
    try:
        g = exact.green_exact(dom, p, z)
        return BoundInterval(g.value, g.value, note=f"exact:{g.formula_id}")
    except exact.NoExactFormulaError:
        pass

    lower_witness = None
    try:
        lower = exact.dmin_exact(dom, p, z).value
    except exact.NoExactFormulaError:
        low = dmin_lower_bound(dom, p, z, cfg)
        lower, lower_witness = low.lower, low.lower_witness

    upper_witness = frame = None
    upper_note = None
    try:
        up = dmax_upper_bound(dom, p, z, cfg)
        upper, upper_witness, frame = up.upper, up.upper_witness, up.upper_frame
    except SearchBudgetError:
        upper, upper_note = 1.0, "trivial upper bound (no certified disc)"

    if lower > upper + cfg.tolerance:
        raise InvariantViolationError(
            f"sandwich inversion: lower {lower!r} > upper {upper!r}; "
            "the family ordering is a theorem, so this indicates a bug"
        )
    return BoundInterval(min(lower, upper), upper, lower_witness=lower_witness,
                         upper_witness=upper_witness, upper_frame=frame,
                         note=upper_note)
