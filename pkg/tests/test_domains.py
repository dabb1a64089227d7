"""Unit tests for domains, gauges, structured maps, and disc certification."""

import math

import numpy as np
import pytest

from greenpoles.domains import (
    ABS_PLUS_SQRT_ABS,
    ABS_SUM,
    MAX_ABS,
    Affine,
    AnalyticDisc,
    CoordinatePower,
    CoordinateProjection,
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
    disc_validity,
    eval_map,
    flatten_to_polydisc,
    gauge_value_bisect,
    minkowski,
)
from greenpoles.errors import DimensionMismatchError, DomainViolationError


def _rand_point(rng, n, rmax=0.9):
    out = []
    for _ in range(n):
        r = rmax * math.sqrt(rng.uniform())
        t = rng.uniform(0, 2 * math.pi)
        out.append(r * complex(math.cos(t), math.sin(t)))
    return tuple(out)


class TestContains:
    def test_examples(self):
        assert contains(UnitDisc(), (0.0,))
        assert not contains(GaugeBall(ABS_SUM, 2), (0.5, 0.5))  # boundary point
        assert contains(ReinhardtPower((1, 2)), (0.9, 0.9))  # |0.9 * 0.81| < 1
        assert contains(Polydisc(3), (0.9, -0.9j, 0.5))
        assert not contains(Polydisc(2), (1.0, 0.0))

    def test_product_and_scaled(self):
        dom = ProductDomain(UnitDisc(), Polydisc(2))
        assert contains(dom, (0.5, 0.5, 0.5))
        assert not contains(dom, (0.5, 1.0, 0.0))
        assert contains(Scaled(0.5, UnitDisc()), (0.49,))
        assert not contains(Scaled(0.5, UnitDisc()), (0.51,))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            contains(Polydisc(2), (0.5,))


class TestMinkowski:
    def test_abs_sum_at_11(self):
        assert minkowski(ABS_SUM, (1.0, 1.0)) == 2.0

    def test_abs_plus_sqrt_at_11(self):
        expected = 2.0 / (3.0 - math.sqrt(5.0))
        assert minkowski(ABS_PLUS_SQRT_ABS, (1.0, 1.0)) == pytest.approx(
            expected, abs=1e-9
        )

    def test_abs_sum_twin_pole(self):
        t = 0.04
        assert minkowski(ABS_SUM, (t, math.sqrt(t))) == t + math.sqrt(t)

    def test_homogeneity(self):
        rng = np.random.default_rng(12)
        for gauge in (ABS_SUM, ABS_PLUS_SQRT_ABS, MAX_ABS):
            for _ in range(80):
                z = _rand_point(rng, 2)
                if all(abs(c) < 1e-6 for c in z):
                    continue
                s = rng.uniform(1e-3, 2.0)
                h1 = minkowski(gauge, tuple(s * c for c in z))
                h2 = s * minkowski(gauge, z)
                assert abs(h1 - h2) <= 1e-10 * max(1.0, h2)

    def test_bisection_cross_check(self):
        rng = np.random.default_rng(13)
        for gauge in (ABS_SUM, ABS_PLUS_SQRT_ABS, MAX_ABS):
            for _ in range(20):
                z = _rand_point(rng, 2, rmax=0.8)
                if minkowski(gauge, z) < 1e-3:
                    continue
                assert gauge_value_bisect(gauge, z) == pytest.approx(
                    minkowski(gauge, z), rel=1e-9
                )

    def test_gauge_below_one_iff_contained(self):
        rng = np.random.default_rng(14)
        for kind, gauge in (("abs_sum", ABS_SUM), ("abs_plus_sqrt_abs", ABS_PLUS_SQRT_ABS)):
            dom = GaugeBall(gauge, 2)
            for _ in range(100):
                z = _rand_point(rng, 2, rmax=1.2)
                assert contains(dom, z) == (minkowski(gauge, z) < 1.0)

    def test_balancedness_sampled(self):
        rng = np.random.default_rng(15)
        dom = GaugeBall(ABS_PLUS_SQRT_ABS, 2)
        hits = 0
        while hits < 50:
            z = _rand_point(rng, 2, rmax=1.0)
            if not contains(dom, z):
                continue
            hits += 1
            lam = rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            assert contains(dom, tuple(complex(lam) * c for c in z))

    def test_unknown_gauge_kind_rejected(self):
        with pytest.raises(DomainViolationError):
            GaugeSpec("euclidean")

    def test_convexity_flags(self):
        assert ABS_SUM.convex and MAX_ABS.convex
        assert not ABS_PLUS_SQRT_ABS.convex


class TestDomainValidation:
    def test_reinhardt_exponents(self):
        with pytest.raises(DomainViolationError):
            ReinhardtPower((2, 4))  # not relatively prime
        with pytest.raises(DomainViolationError):
            ReinhardtPower((0, 1))
        assert ReinhardtPower((1, 2)).alpha == (1, 2)

    def test_scaled_range(self):
        with pytest.raises(DomainViolationError):
            Scaled(0.0, UnitDisc())
        with pytest.raises(DomainViolationError):
            Scaled(1.5, UnitDisc())

    def test_flatten(self):
        assert flatten_to_polydisc(ProductDomain(UnitDisc(), Polydisc(2))) == 3
        assert flatten_to_polydisc(GaugeBall(MAX_ABS, 2)) == 2
        assert flatten_to_polydisc(GaugeBall(ABS_SUM, 2)) is None
        assert flatten_to_polydisc(Scaled(0.5, Polydisc(2))) is None


class TestMaps:
    def test_identity_chain(self):
        z = (0.1 + 0.2j, -0.3j)
        assert eval_map(HoloMapSpec(()), z) == z

    def test_coordinate_power_square(self):
        t = 0.04
        s = math.sqrt(t)
        F = HoloMapSpec((CoordinatePower((1, 2)),))
        got = F((t, s))
        assert got[0] == t and got[1] == pytest.approx(t, abs=1e-15)

    def test_monomial(self):
        F = HoloMapSpec((MonomialMap((1, 2)),))
        z = (0.3 + 0.1j, 0.2 - 0.4j)
        assert F(z)[0] == z[0] * z[1] ** 2

    def test_projection_and_affine(self):
        F = HoloMapSpec((
            Affine(((1.0, 0.0), (0.0, 2.0)), (0.0, 0.1)),
            CoordinateProjection((1,)),
        ))
        assert F((0.2, 0.3))[0] == pytest.approx(0.7)

    def test_mobius_inverse_roundtrip(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            params = tuple(
                (complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)),
                 rng.uniform(0, 2 * math.pi))
                for _ in range(2)
            )
            F = PerCoordinateMobius(params)
            z = _rand_point(rng, 2)
            back = F.inverse().apply(F.apply(z))
            assert all(abs(a - b) < 1e-13 for a, b in zip(back, z))

    def test_codomain_checking(self):
        F = HoloMapSpec((CoordinatePower((2,)),))
        eval_map(F, (0.5,), codomain=UnitDisc())
        with pytest.raises(DomainViolationError):
            eval_map(F, (0.5,), codomain=Scaled(0.1, UnitDisc()))
        with pytest.raises(DimensionMismatchError):
            eval_map(F, (0.5,), codomains=[None, None])

    def test_arity_checks(self):
        with pytest.raises(DimensionMismatchError):
            HoloMapSpec((CoordinatePower((1, 2)),))((0.5,))


class TestAnalyticDisc:
    def test_eval_and_degree(self):
        d = AnalyticDisc(((0j, 0j, 0.25 + 0j), (0j, 0.5 + 0j)))
        assert d.degree == 2 and d.n_out == 2
        lam = 0.3 + 0.4j
        val = d(lam)
        assert val[0] == pytest.approx(lam * lam / 4)
        assert val[1] == pytest.approx(lam / 2)

    def test_constant_disc_valid_at_interior_point(self):
        d = AnalyticDisc.constant((0.2, 0.3))
        assert disc_validity(d, GaugeBall(ABS_SUM, 2), 1e-6)

    def test_quadratic_disc_certified(self):
        # boundary gauge 1/4 + 1/2 = 3/4 < 1
        d = AnalyticDisc(((0j, 0j, 0.25 + 0j), (0j, 0.5 + 0j)))
        assert disc_validity(d, GaugeBall(ABS_SUM, 2), 1e-6)

    def test_diagonal_disc_rejected(self):
        d = AnalyticDisc(((0j, 1.0 + 0j), (0j, 1.0 + 0j)))
        assert not disc_validity(d, GaugeBall(ABS_SUM, 2), 1e-6)

    def test_margin_mandatory(self):
        d = AnalyticDisc.constant((0.0, 0.0))
        with pytest.raises(DomainViolationError):
            disc_validity(d, GaugeBall(ABS_SUM, 2), 0.0)

    def test_validity_in_polydisc_and_reinhardt(self):
        d = AnalyticDisc(((0j, 0.9 + 0j), (0j, 0.9 + 0j)))
        assert disc_validity(d, Polydisc(2), 1e-6)
        assert disc_validity(d, ReinhardtPower((1, 2)), 1e-6)
