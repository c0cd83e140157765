"""Pair potentials, the capped/short-range split, and envelope checks."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mayerbounds.potentials import (
    InversePower,
    LennardJones,
    LJTypeEnvelope,
    NotBasuevAtCutError,
    PotentialDomainError,
    TabulatedPotential,
    hard_core_wrap,
    lennard_jones,
    lj_type_check,
    negative_part,
    potential_from_config,
    split,
)

LJ_ZERO = 2.0 ** (-1.0 / 6.0)


class TestLennardJones:
    def test_minimum_at_one(self):
        assert lennard_jones(1.0) == -1.0

    def test_zero_crossing(self):
        assert abs(lennard_jones(LJ_ZERO)) < 1e-14

    def test_value_at_0_3637(self):
        with mpmath.workdps(30):
            expected = float(mpmath.mpf("0.3637") ** -12 - 2 / mpmath.mpf("0.3637") ** 6)
        assert math.isclose(lennard_jones(0.3637), expected, rel_tol=1e-14)
        assert math.isclose(lennard_jones(0.3637), 1.858e5, rel_tol=1e-3)

    def test_domain_error(self):
        with pytest.raises(PotentialDomainError):
            lennard_jones(0.0)
        with pytest.raises(PotentialDomainError):
            lennard_jones(-1.0)
        with pytest.raises(PotentialDomainError):
            LennardJones()(np.array([0.5, -0.5]))

    def test_vectorized(self):
        r = np.array([0.5, 1.0, 2.0])
        out = LennardJones()(r)
        assert out.shape == (3,)
        assert out[1] == -1.0

    @given(st.floats(min_value=1e-3, max_value=0.999))
    @settings(max_examples=100, deadline=None)
    def test_monotone_decreasing_inside_minimum(self, r):
        assert lennard_jones(r) > lennard_jones(r + 1e-3)


class TestNegativePart:
    def test_examples(self):
        lj = LennardJones()
        assert negative_part(lj, 0.5) == 0.0
        assert negative_part(lj, 1.0) == 1.0
        assert negative_part(lj, 1.5) == -lennard_jones(1.5)

    def test_identity_half_abs_minus_value(self):
        lj = LennardJones()
        r = np.geomspace(0.3, 10.0, 200)
        v = lj(r)
        np.testing.assert_allclose(negative_part(lj, r), 0.5 * (np.abs(v) - v), atol=1e-12)

    def test_nonnegative_and_opposite_sign(self):
        lj = LennardJones()
        r = np.geomspace(0.2, 20.0, 500)
        nparts = negative_part(lj, r)
        assert np.all(nparts >= 0.0)
        assert np.all(nparts * lj(r) <= 0.0)


class TestSplit:
    def test_capped_value_inside(self):
        parts = split(LennardJones(), 0.3637)
        assert parts.tail_part(0.1) == lennard_jones(0.3637)
        assert parts.tail_part(0.3637) == lennard_jones(0.3637)
        assert parts.tail_part(1.0) == -1.0

    def test_short_part_zero_beyond_cut(self):
        parts = split(LennardJones(), 0.6397)
        for r in (0.63971, 0.7, 1.0, 5.0, 50.0):
            assert parts.short_part(r) == 0.0

    def test_short_part_positive_inside(self):
        parts = split(LennardJones(), 0.6397)
        assert math.isclose(
            parts.short_part(0.3),
            lennard_jones(0.3) - lennard_jones(0.6397),
            rel_tol=1e-12,
        )
        assert parts.short_part(0.3) > 0.0

    @pytest.mark.parametrize("a", [0.3637, 0.5, 0.6397])
    def test_reconstruction_exact_to_roundoff(self, a):
        lj = LennardJones()
        parts = split(lj, a)
        r = np.geomspace(a * 1e-3, 30.0, 10_000)
        v = lj(r)
        diff = np.abs(parts.tail_part(r) + parts.short_part(r) - v)
        # one ulp of V(r): the cap-then-add rounds once when |V| >> V(a)
        assert np.all(diff <= 4e-16 * np.maximum(np.abs(v), 1.0))

    @pytest.mark.parametrize("a", [0.3, 0.5, 0.7, 0.88])
    def test_short_part_sign_below_lj_zero(self, a):
        parts = split(LennardJones(), a)
        r = np.geomspace(a * 1e-6, a, 2000)
        assert np.all(parts.short_part(r) >= 0.0)

    def test_rejects_cut_beyond_positivity(self):
        with pytest.raises(NotBasuevAtCutError):
            split(LennardJones(), 0.95)  # V(0.95) < 0
        with pytest.raises(NotBasuevAtCutError):
            split(LennardJones(), 1.5)

    def test_rejects_non_monotone_region(self):
        dips = TabulatedPotential(knots=((0.5, 5.0), (0.7, 1.0), (0.9, 3.0)))
        with pytest.raises(NotBasuevAtCutError):
            split(dips, 0.9)

    def test_rejects_nonpositive_cut(self):
        with pytest.raises(PotentialDomainError):
            split(LennardJones(), -0.1)


class TestLJTypeCheck:
    def test_documented_envelope_passes(self):
        report = lj_type_check(LennardJones(), LennardJones.default_envelope())
        assert report.passed
        assert report.first_failure is None

    def test_oversized_repulsion_floor_fails_with_witness(self):
        env = LJTypeEnvelope(
            c_repulsion=1e6, c_attraction=2.0, r1=0.8, r2=1.0,
            well_depth=1.0, decay_surplus=3.0,
        )
        report = lj_type_check(LennardJones(), env)
        assert not report.passed
        region, r, value, bound = report.first_failure
        assert region == "core"
        assert value < bound
        assert 0 < r <= 0.8

    def test_pure_repulsive_with_vanishing_well(self):
        v = InversePower(1.0, 12.0)
        env = LJTypeEnvelope(
            c_repulsion=0.5, c_attraction=1e-12, r1=0.9, r2=1.0,
            well_depth=0.0, decay_surplus=6.0,
        )
        assert lj_type_check(v, env).passed

    def test_envelope_validation(self):
        with pytest.raises(ValueError):
            LJTypeEnvelope(0.0, 1.0, 0.8, 1.0, 1.0, 3.0)
        with pytest.raises(ValueError):
            LJTypeEnvelope(1.0, 1.0, 1.2, 1.0, 1.0, 3.0)  # r1 > r2
        with pytest.raises(ValueError):
            LJTypeEnvelope(1.0, 1.0, 0.8, 1.0, 1.0, 0.0)  # no decay surplus


class TestHardCoreWrap:
    def test_values(self):
        hc = hard_core_wrap(LennardJones(), 0.5, 100.0)
        assert hc(0.2) == 100.0
        assert hc(0.5) == 100.0
        assert hc(0.8) == lennard_jones(0.8)

    def test_gibbs_factor_monotone_in_height(self):
        values = [math.exp(-h) for h in (10.0, 20.0, 40.0)]
        assert values[0] > values[1] > values[2]

    def test_validation(self):
        with pytest.raises(ValueError):
            hard_core_wrap(LennardJones(), 0.0, 1.0)
        with pytest.raises(ValueError):
            hard_core_wrap(LennardJones(), 1.0, -5.0)


class TestTabulated:
    def test_interpolation_and_extrapolation(self):
        tab = TabulatedPotential(knots=((1.0, 2.0), (2.0, 0.0)))
        assert tab(0.5) == 2.0  # constant inside first knot
        assert tab(1.5) == 1.0  # linear between
        assert tab(3.0) == 0.0  # zero beyond last
        assert tab.tail_terms() == ()

    def test_unsorted_knots_rejected(self):
        with pytest.raises(ValueError):
            TabulatedPotential(knots=((2.0, 1.0), (1.0, 2.0)))


class TestConfig:
    def test_lennard_jones(self):
        v = potential_from_config({"kind": "lennard-jones"})
        assert v.kind == "lennard-jones"
        assert potential_from_config({"kind": "lj"}).kind == "lennard-jones"

    def test_inverse_power_and_default_dimension(self):
        v = potential_from_config({"kind": "inverse-power", "C": 2.0, "p": 6.0})
        assert v.d == 3
        assert v(2.0) == 2.0 * 2.0**-6.0

    def test_hard_core_nested(self):
        cfg = {
            "kind": "hard-core",
            "a": 0.5,
            "H": 30.0,
            "tail": {"kind": "lennard-jones"},
        }
        v = potential_from_config(cfg)
        assert v(0.4) == 30.0
        assert v(1.0) == -1.0
        assert v.config() == cfg | {"tail": {"kind": "lennard-jones", "d": 3}}

    def test_tabulated(self):
        v = potential_from_config({"kind": "tabulated", "knots": [[1.0, 1.0], [2.0, 0.0]]})
        assert v(1.0) == 1.0

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            potential_from_config({"kind": "morse"})
