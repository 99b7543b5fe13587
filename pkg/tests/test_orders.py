import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grating_orders.diffraction import GratingSpec, order_alpha, sinc_sq_at_order
from grating_orders.orders import (
    CurveKind,
    DEFAULT_RULE,
    InclusionRule,
    ProbabilityCurve,
    curve,
    normalized_resultant_probability,
    occupation_value,
    omega_from_delta_p,
    order_probability,
    order_table,
    output_probability,
    propagating_orders,
    resultant_sum,
    zero_order_energy,
    zero_order_share,
)
from grating_orders.quadrature import Interval, adaptive_integrate

LAMBDA = 633.0
ALPHA_3 = float(order_alpha(3, 0.5))
STRICT = InclusionRule(mode="strict_below")

# Frozen from the 25-digit oracle (sum of sinc^2 strips over the Si-based
# envelope integral), cross-checked against adaptive quadrature below.
P_R_BELOW_3 = 0.9722832831
P_R_ABOVE_3 = 1.0206475706
OMEGA_BELOW_3 = 1.0285068327
OMEGA_ABOVE_3 = 0.9797701272
SUM_BELOW_3 = 2.8440358715  # pi/2 * (1 + 2 sinc^2(pi/2))
SUM_ABOVE_3 = 2.9855069321  # ... + 2 sinc^2(3pi/2)
SHARE_UP_TO_3 = 0.5523124172  # 1 / (1 + 2 sinc^2(pi/2))
SHARE_3_TO_5 = 0.5261405726


class TestPropagatingOrders:
    def test_symmetric_window(self):
        assert propagating_orders(2.63 * math.pi / 2, 0.5) == list(range(-2, 3))
        assert propagating_orders(3.16 * math.pi / 2, 0.5) == list(range(-3, 4))

    def test_threshold_sides(self):
        assert propagating_orders(ALPHA_3 - 1e-6, 0.5, STRICT) == list(range(-2, 3))
        assert propagating_orders(ALPHA_3 - 1e-6, 0.5) == list(range(-2, 3))
        assert propagating_orders(ALPHA_3 + 1e-6, 0.5) == list(range(-3, 4))

    def test_exact_threshold_tie(self):
        # default rule counts an order sitting exactly at truncation
        assert propagating_orders(ALPHA_3, 0.5) == list(range(-3, 4))
        assert propagating_orders(ALPHA_3, 0.5, STRICT) == list(range(-2, 3))

    def test_boundary_at_pi(self):
        # the +-2nd orders sit exactly at alpha_t = pi (and are envelope null)
        assert propagating_orders(math.pi, 0.5) == list(range(-2, 3))
        assert propagating_orders(math.pi, 0.5, STRICT) == list(range(-1, 2))

    def test_requires_positive_alpha_t(self):
        with pytest.raises(ValueError):
            propagating_orders(0.0, 0.5)

    @given(st.floats(0.1, 60.0), st.sampled_from([0.5, 0.25, 0.125]))
    @settings(max_examples=200)
    def test_window_matches_rule(self, at, sigma):
        orders = propagating_orders(at, sigma)
        n = orders[-1]
        assert orders == list(range(-n, n + 1))
        assert n * math.pi * sigma <= at + DEFAULT_RULE.eps_tie
        assert (n + 1) * math.pi * sigma > at + DEFAULT_RULE.eps_tie


class TestOutputProbability:
    def test_full_line_limit(self):
        assert output_probability(1e6, 1) == pytest.approx(math.pi, abs=1e-3)

    def test_three_half_pi(self):
        assert output_probability(1.5 * math.pi, 1) == pytest.approx(2.9251104164, rel=1e-9)

    def test_linear_in_slit_count(self):
        assert output_probability(1.5 * math.pi, 4) == 4.0 * output_probability(1.5 * math.pi, 1)

    def test_strictly_increasing(self):
        values = [output_probability(at, 1) for at in np.linspace(0.5, 20.0, 80)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestResultantSum:
    def test_frozen_values_at_third_order_threshold(self):
        assert resultant_sum(ALPHA_3 + 1e-6, 0.5, 1) == pytest.approx(SUM_ABOVE_3, rel=1e-9)
        assert resultant_sum(ALPHA_3 - 1e-6, 0.5, 1) == pytest.approx(SUM_BELOW_3, rel=1e-9)

    def test_linear_in_slit_count(self):
        assert resultant_sum(5.0, 0.5, 7) == pytest.approx(7 * resultant_sum(5.0, 0.5, 1), rel=1e-15)

    def test_dense_sampling_approaches_output_probability(self):
        at = 2.5 * math.pi
        out = output_probability(at, 1)
        devs = [abs(resultant_sum(at, s, 1) / out - 1.0) for s in (0.25, 0.125, 0.0625, 0.03125)]
        assert all(b < a for a, b in zip(devs, devs[1:]))

    def test_deviation_bounded_linearly_in_sigma_at_generic_point(self):
        # at a generic truncation the full-line strip sum of sinc^2 is exact
        # (its spectrum is band limited), so only a small boundary term
        # survives; it stays well under C * sigma although it oscillates in
        # size rather than decreasing monotonically (C = 2e-4 has 40% margin
        # over the observed worst case at this point)
        at = 3 * math.pi + 0.1
        for sigma in (0.25, 0.125, 0.0625, 0.03125):
            dev = abs(normalized_resultant_probability(at, sigma) - 1.0)
            assert dev <= 2e-4 * sigma


class TestNormalizedResultantProbability:
    def test_dense_sampling_is_conserving(self):
        # mid-gap truncation for a 1/8 duty cycle
        at = 1.5 * math.pi + math.pi / 16
        assert normalized_resultant_probability(at, 0.125) == pytest.approx(1.0, abs=0.02)

    def test_sparse_sampling_threshold_values(self):
        assert normalized_resultant_probability(ALPHA_3 - 1e-6, 0.5) == pytest.approx(
            P_R_BELOW_3, rel=1e-9
        )
        assert normalized_resultant_probability(ALPHA_3 + 1e-6, 0.5) == pytest.approx(
            P_R_ABOVE_3, rel=1e-9
        )

    def test_cross_checked_by_quadrature_oracle(self):
        at = ALPHA_3 - 1e-6
        oracle_denominator = adaptive_integrate(
            lambda a: (math.sin(a) / a) ** 2 if a else 1.0, Interval(-at, at), 1e-10
        ).value
        expected = SUM_BELOW_3 / oracle_denominator
        assert normalized_resultant_probability(at, 0.5) == pytest.approx(expected, rel=1e-8)

    def test_domain_requires_first_strip(self):
        with pytest.raises(ValueError, match="pi\\*sigma"):
            normalized_resultant_probability(math.pi / 4, 0.5)

    def test_converges_to_unity_for_coarse_gratings(self):
        assert normalized_resultant_probability(100 * math.pi, 0.5) == pytest.approx(1.0, abs=0.01)


class TestOrderProbability:
    def test_zero_order_at_third_threshold(self):
        assert order_probability(0, ALPHA_3, 0.5) == pytest.approx(0.5370041138, rel=1e-9)

    def test_even_orders_are_exactly_null(self):
        assert order_probability(2, ALPHA_3, 0.5) == 0.0
        assert order_probability(-2, ALPHA_3, 0.5) == 0.0

    def test_symmetric_in_j(self):
        assert order_probability(1, ALPHA_3, 0.5) == order_probability(-1, ALPHA_3, 0.5)

    def test_non_propagating_order_rejected(self):
        with pytest.raises(ValueError, match="not propagating"):
            order_probability(5, ALPHA_3, 0.5)


class TestOccupationValue:
    def test_threshold_pair(self):
        assert occupation_value(ALPHA_3 - 1e-6, 0.5) == pytest.approx(OMEGA_BELOW_3, rel=1e-9)
        assert occupation_value(ALPHA_3 + 1e-6, 0.5) == pytest.approx(OMEGA_ABOVE_3, rel=1e-9)

    def test_against_stated_modulation(self):
        # idealized +-2.5% modulation at the third-order threshold pair
        assert occupation_value(ALPHA_3 - 1e-6, 0.5) == pytest.approx(1.0284, abs=5e-3)
        assert occupation_value(ALPHA_3 + 1e-6, 0.5) == pytest.approx(0.9796, abs=5e-3)

    def test_control_grating_is_ordinary(self):
        assert occupation_value(3.94 * math.pi / 2, 0.5) == pytest.approx(1.0, abs=5e-3)

    def test_asymptote(self):
        assert 0.99 <= occupation_value(100 * math.pi, 0.5) <= 1.01

    @given(st.floats(1.8, 40.0), st.sampled_from([0.5, 0.125]))
    @settings(max_examples=150)
    def test_reciprocity(self, at, sigma):
        product = occupation_value(at, sigma) * normalized_resultant_probability(at, sigma)
        assert abs(product - 1.0) <= 1e-12


class TestOmegaFromDeltaP:
    def test_zero_excursion(self):
        assert omega_from_delta_p(0.0, 1.0, "created") == 1.0
        assert omega_from_delta_p(0.0, 1.0, "annihilated") == 1.0

    def test_direction(self):
        assert omega_from_delta_p(0.0276, 1.0, "annihilated") == pytest.approx(
            1.0 / (1.0 - 0.0276), rel=1e-15
        )
        assert omega_from_delta_p(0.0208, 1.0, "created") == pytest.approx(
            1.0 / 1.0208, rel=1e-15
        )

    def test_annihilated_bounded_by_base(self):
        with pytest.raises(ValueError):
            omega_from_delta_p(1.0, 1.0, "annihilated")

    def test_sign_keyword_validated(self):
        with pytest.raises(ValueError):
            omega_from_delta_p(0.01, 1.0, "sideways")

    @given(st.floats(1.8, 30.0))
    @settings(max_examples=100)
    def test_consistent_with_occupation_value(self, at):
        # the probability-excursion route reproduces the occupation route
        p_o = output_probability(at, 1)
        p_r = resultant_sum(at, 0.5, 1)
        sign = "created" if p_r >= p_o else "annihilated"
        omega = omega_from_delta_p(abs(p_r - p_o), p_o, sign)
        assert omega == pytest.approx(occupation_value(at, 0.5), rel=1e-9)


class TestZeroOrderShare:
    def test_only_zero_order(self):
        assert zero_order_share(1.0, 0.5) == 1.0

    def test_step_values(self):
        assert zero_order_share(2.0, 0.5) == pytest.approx(SHARE_UP_TO_3, rel=1e-9)
        assert zero_order_share(6.0, 0.5) == pytest.approx(SHARE_3_TO_5, rel=1e-9)

    def test_piecewise_constant_between_odd_orders(self):
        assert zero_order_share(1.7, 0.5) == zero_order_share(4.6, 0.5)

    def test_no_step_at_even_orders(self):
        a2 = float(order_alpha(2, 0.5))
        assert zero_order_share(a2 - 1e-6, 0.5) == zero_order_share(a2 + 1e-6, 0.5)

    def test_steps_down_at_odd_orders(self):
        for j in (1, 3, 5, 7):
            aj = float(order_alpha(j, 0.5))
            assert zero_order_share(aj + 1e-6, 0.5) < zero_order_share(aj - 1e-6, 0.5)

    def test_energy_is_share_scaled(self):
        assert zero_order_energy(2.0, 0.5, 1.0) == zero_order_share(2.0, 0.5)
        assert zero_order_energy(2.0, 0.5, 2.0) == 2.0 * zero_order_share(2.0, 0.5)

    def test_energy_requires_positive_total(self):
        with pytest.raises(ValueError):
            zero_order_energy(2.0, 0.5, 0.0)


class TestOrderTable:
    @pytest.fixture()
    def g316(self):
        return order_table(GratingSpec.ronchi(1000.0, LAMBDA, 257))

    def test_energy_conserved(self, g316):
        assert g316.e_r == pytest.approx(1.0, abs=1e-9)
        assert math.fsum(r.energy_share for r in g316.rows) == pytest.approx(1.0, abs=1e-9)

    def test_row_omegas_equal_table_omega(self, g316):
        for row in g316.rows:
            assert row.omega_j == pytest.approx(g316.omega, abs=1e-9)

    def test_even_rows_null(self, g316):
        for row in g316.rows:
            if row.j % 2 == 0 and row.j != 0:
                assert row.p_rj == 0.0
                assert row.energy_share == 0.0

    def test_symmetric_rows(self, g316):
        by_j = {r.j: r for r in g316.rows}
        for j in (1, 2, 3):
            assert by_j[j].p_rj == by_j[-j].p_rj
            assert by_j[j].energy_share == by_j[-j].energy_share

    def test_frozen_totals(self, g316):
        assert g316.p_r == pytest.approx(1.0133720, rel=1e-6)
        assert g316.omega == pytest.approx(0.9868044, rel=1e-6)

    def test_frozen_rows(self, g316):
        by_j = {r.j: r for r in g316.rows}
        assert by_j[0].p_rj == pytest.approx(0.533176133, rel=1e-8)
        assert by_j[1].energy_share == pytest.approx(0.213236742, rel=1e-8)
        assert by_j[3].energy_share == pytest.approx(0.0236929714, rel=1e-8)

    def test_threshold_pair_totals(self):
        lam = LAMBDA
        below = order_table(GratingSpec.from_truncation(ALPHA_3 - 1e-6, lam, 0.5, 257))
        above = order_table(GratingSpec.from_truncation(ALPHA_3 + 1e-6, lam, 0.5, 257))
        assert below.p_r == pytest.approx(P_R_BELOW_3, rel=1e-7)
        assert below.omega == pytest.approx(OMEGA_BELOW_3, rel=1e-7)
        assert above.p_r == pytest.approx(P_R_ABOVE_3, rel=1e-7)
        assert above.omega == pytest.approx(OMEGA_ABOVE_3, rel=1e-7)
        assert [r.j for r in below.rows] == list(range(-2, 3))
        assert [r.j for r in above.rows] == list(range(-3, 4))
        by_j = {r.j: r for r in above.rows}
        assert by_j[3].energy_share == pytest.approx(0.023692971, rel=1e-6)


class TestCurve:
    def test_resultant_curve_shape(self):
        c = curve(CurveKind.RESULTANT_PROBABILITY, 0.5, (math.pi, 3 * math.pi), 400)
        assert c.kind is CurveKind.RESULTANT_PROBABILITY
        assert np.all(np.diff(c.abscissa) > 0)
        # upward jumps only at odd orders, decaying with j
        jumps = {}
        for j in (3, 5):
            aj = float(order_alpha(j, 0.5))
            left = c.ordinate[np.searchsorted(c.abscissa, aj - 1e-6)]
            right = c.ordinate[np.searchsorted(c.abscissa, aj + 1e-6)]
            jumps[j] = right - left
        assert jumps[3] > jumps[5] > 0

    def test_edge_pairs_are_inserted(self):
        c = curve(CurveKind.RESULTANT_PROBABILITY, 0.5, (math.pi, 3 * math.pi), 50)
        for j in (3, 4, 5):
            aj = float(order_alpha(j, 0.5))
            assert aj - 1e-6 in c.abscissa
            assert aj + 1e-6 in c.abscissa

    def test_non_increasing_between_orders(self):
        c = curve(CurveKind.RESULTANT_PROBABILITY, 0.5, (math.pi, 3 * math.pi), 800)
        a, v = c.abscissa, c.ordinate
        for j in (2, 3, 4, 5):
            lo = float(order_alpha(j, 0.5)) + 2e-6
            hi = float(order_alpha(j + 1, 0.5)) - 2e-6
            seg = v[(a >= lo) & (a <= hi)]
            assert np.all(np.diff(seg) <= 1e-15)

    def test_jump_magnitude_matches_strip_formula(self):
        from grating_orders.quadrature import Interval, sinc_sq_integral

        c = curve(CurveKind.RESULTANT_PROBABILITY, 0.5, (math.pi, 3 * math.pi), 400)
        aj = float(order_alpha(3, 0.5))
        left = c.ordinate[np.searchsorted(c.abscissa, aj - 1e-6)]
        right = c.ordinate[np.searchsorted(c.abscissa, aj + 1e-6)]
        expected = (
            2 * math.pi * 0.5 * sinc_sq_at_order(3, 0.5)
            / sinc_sq_integral(Interval(-aj, aj))
        )
        assert right - left == pytest.approx(expected, rel=1e-4)

    def test_occupation_curve_is_reciprocal(self):
        grid = (math.pi, 3 * math.pi)
        p = curve(CurveKind.RESULTANT_PROBABILITY, 0.5, grid, 300)
        w = curve(CurveKind.OCCUPATION, 0.5, grid, 300)
        assert np.array_equal(p.abscissa, w.abscissa)
        assert np.max(np.abs(p.ordinate * w.ordinate - 1.0)) <= 1e-12

    def test_share_curve_is_non_increasing_step_function(self):
        c = curve(CurveKind.ZERO_ORDER_SHARE, 0.5, (math.pi / 4, 4 * math.pi), 600)
        assert np.all(np.diff(c.ordinate) <= 1e-15)
        assert c.ordinate[0] == 1.0

    def test_energy_curve_scales(self):
        a = curve(CurveKind.ZERO_ORDER_ENERGY, 0.5, (1.0, 7.0), 50, e_o=1.0)
        b = curve(CurveKind.ZERO_ORDER_ENERGY, 0.5, (1.0, 7.0), 50, e_o=2.0)
        assert np.allclose(b.ordinate, 2.0 * a.ordinate, rtol=1e-15)

    def test_domain_validation(self):
        with pytest.raises(ValueError, match="pi\\*sigma"):
            curve(CurveKind.RESULTANT_PROBABILITY, 0.5, (math.pi / 4, math.pi), 10)
        with pytest.raises(ValueError):
            curve(CurveKind.ZERO_ORDER_SHARE, 0.5, (2.0, 1.0), 10)
        with pytest.raises(ValueError):
            curve(CurveKind.ZERO_ORDER_SHARE, 0.5, (1.0, 2.0), 1)

    def test_probability_curve_validation(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            ProbabilityCurve(np.array([1.0, 1.0]), np.array([1.0, 1.0]),
                             CurveKind.ZERO_ORDER_SHARE)
        with pytest.raises(ValueError, match="finite and positive"):
            ProbabilityCurve(np.array([1.0, 2.0]), np.array([1.0, -1.0]),
                             CurveKind.ZERO_ORDER_SHARE)
