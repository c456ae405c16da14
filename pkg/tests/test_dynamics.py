import math

import numpy as np
import pytest

from graftlab import (
    LengthInterval,
    LengthState,
    Role,
    ShortnessError,
    TrajectoryMode,
    WeightedMulticurve,
    accumulation_analysis,
    collapse_distance_bound,
    counterexample_ratio,
    decay_factor,
    endpoint_cauchy_analysis,
    endpoint_descriptor,
    geodesic_tube_radius,
    geometric_convergence_threshold,
    holonomy_tube_radius,
    iterate_grafting,
    iterated_lift_radius,
    ray_grafting,
    ray_reparametrization,
)
from graftlab.grafting import graft_factors

import oracles

LIFT_Q_2PI = 0.8716855428717357        # 3^(-1/8)
LIFT_LIMIT_MULT = 7.793354095714957    # 1/(1 - 3^(-1/8))
TUBE_01_RATIO2 = 1.4430413898924011    # 0.1^(1/8) + log 2
COLLAPSE_01_2PI = 0.5601423259488289
THRESHOLD_01_01 = 0.07329355988794277  # (0.1/pi) log 10

TWO_PI = 2 * math.pi


def single_state(l=0.1, epsilon=0.1):
    return LengthState(
        roles={"g": Role.SUPPORT},
        lengths={"g": LengthInterval.point(l)},
        epsilon=epsilon,
    )


class TestIterateGrafting:
    def test_zero_steps_is_singleton(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 0)
        assert len(traj.steps) == 1
        assert traj.mode is TrajectoryMode.ITERATE

    def test_three_steps_two_pi(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 3)
        assert traj.hi_series("g")[3] == pytest.approx(0.1 / 27.0, rel=1e-13)

    def test_upper_chain_exact_twenty_steps(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 20)
        his = traj.hi_series("g")
        for n, hi in enumerate(his):
            assert hi == pytest.approx(0.1 * 3.0**-n, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("t", [math.pi, TWO_PI, 4 * math.pi, 1.3])
    def test_upper_bound_by_decay_power(self, t):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": t}), 20)
        f = decay_factor(t)
        for n, hi in enumerate(traj.hi_series("g")):
            assert hi <= 0.1 * f**n * (1.0 + 1e-12)

    def test_lower_chain_positive_product(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 15)
        his = traj.hi_series("g")
        los = traj.lo_series("g")
        prod = 0.1
        for n in range(1, 16):
            prod *= graft_factors(his[n - 1], TWO_PI).lower
            assert los[n] > 0.0
            assert los[n] == pytest.approx(prod, rel=1e-12)

    def test_shortness_propagates(self):
        # Once the start is short, every later step is shorter; no error at n = 25.
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": 0.5}), 25)
        assert traj.steps[-1].lengths["g"].hi < 0.1


class TestRayGrafting:
    def test_each_step_from_initial(self):
        state = single_state()
        traj = ray_grafting(state, WeightedMulticurve({"g": 1.0}), [1.0, 2.0, 4.0])
        assert traj.mode is TrajectoryMode.RAY
        for s, step in zip(traj.s_values, traj.steps[1:]):
            expected = decay_factor(s * 1.0) * 0.1
            assert step.lengths["g"].hi == pytest.approx(expected, rel=1e-14)


class TestDecayFactor:
    def test_one_third(self):
        assert decay_factor(TWO_PI) == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_limits(self):
        assert decay_factor(1e-12) == pytest.approx(1.0, abs=1e-12)
        assert decay_factor(1e12) < 1e-11


class TestRayReparametrization:
    def test_zero_lifts(self):
        assert ray_reparametrization(0, 1.0, 3.3) == 3.3

    def test_frozen_value(self):
        assert ray_reparametrization(1, math.pi, 2.0) == pytest.approx(5.0, rel=1e-15)

    def test_affine_slope(self):
        n, t = 3, 1.7
        slope = ray_reparametrization(n, t, 4.0) - ray_reparametrization(n, t, 3.0)
        assert slope == pytest.approx(n * t / math.pi + 1.0, rel=1e-13)
        assert slope > 1.0


class TestHolonomyTubeRadius:
    def test_single_curve_no_weight_term(self):
        report = holonomy_tube_radius(single_state(), WeightedMulticurve({"g": TWO_PI}))
        assert dict(report.terms)["weight_ratio"] == 0.0

    def test_frozen_two_weight_value(self):
        state = LengthState(
            roles={"a": Role.SUPPORT, "b": Role.SUPPORT},
            lengths={"a": LengthInterval.point(0.1), "b": LengthInterval.point(0.05)},
        )
        lam = WeightedMulticurve({"a": TWO_PI, "b": 4 * math.pi})
        report = holonomy_tube_radius(state, lam, c=1.0)
        assert report.radius == pytest.approx(TUBE_01_RATIO2, rel=1e-13)

    def test_radius_independent_of_lift_index(self):
        # The bound involves no lift index at all; iterating the state and
        # re-grafting from it must not be needed to keep one tube. Assert the
        # same report over a range of hypothetical indices.
        state = single_state()
        lam = WeightedMulticurve({"g": TWO_PI})
        radii = {holonomy_tube_radius(state, lam).radius for _ in range(1, 51)}
        assert len(radii) == 1

    def test_shortness_enforced(self):
        with pytest.raises(ShortnessError):
            holonomy_tube_radius(single_state(l=0.2), WeightedMulticurve({"g": 1.0}))

    def test_geodesic_tube_adds_external_constant(self):
        state = single_state()
        lam = WeightedMulticurve({"g": TWO_PI})
        inner = holonomy_tube_radius(state, lam)
        outer = geodesic_tube_radius(state, lam, diaz_kim_radius=2.5)
        assert outer.radius == pytest.approx(2.5 + inner.radius, rel=1e-15)
        assert outer.terms[0] == ("ray_to_geodesic", 2.5)


class TestIteratedLiftRadius:
    def test_single_term(self):
        bound = iterated_lift_radius(0.1, TWO_PI, 1.0, 0)
        assert bound.partial_sum == pytest.approx(0.1**0.125, rel=1e-14)

    def test_frozen_ratio_and_limit(self):
        bound = iterated_lift_radius(0.1, TWO_PI, 1.0, 5)
        assert bound.ratio == pytest.approx(LIFT_Q_2PI, rel=1e-14)
        assert bound.limit == pytest.approx(0.1**0.125 * LIFT_LIMIT_MULT, rel=1e-13)
        assert LIFT_Q_2PI == pytest.approx(
            oracles.as_float(oracles.lift_ratio(TWO_PI)), rel=1e-15
        )

    def test_partial_sums_increase_to_limit(self):
        bounds = [iterated_lift_radius(0.1, TWO_PI, 1.0, n) for n in range(40)]
        sums = [b.partial_sum for b in bounds]
        assert all(b > a for a, b in zip(sums, sums[1:]))
        assert all(s < bounds[0].limit for s in sums)
        tail = bounds[0].limit - sums[-1]
        geometric_tail = 0.1**0.125 * LIFT_Q_2PI**40 / (1.0 - LIFT_Q_2PI)
        assert tail == pytest.approx(geometric_tail, rel=1e-10)


class TestCollapseDistance:
    def test_vanishes_without_cylinder(self):
        assert collapse_distance_bound(0.1, 1e-15) == pytest.approx(0.0, abs=1e-15)

    def test_frozen_value(self):
        got = collapse_distance_bound(0.1, TWO_PI)
        assert got == pytest.approx(COLLAPSE_01_2PI, rel=1e-13)
        assert COLLAPSE_01_2PI == pytest.approx(
            oracles.as_float(oracles.collapse_distance(0.1, TWO_PI)), rel=1e-14
        )

    def test_monotone_in_both_arguments(self):
        grid = np.linspace(0.01, 0.5, 30)
        in_s = [collapse_distance_bound(0.1, float(s)) for s in grid]
        in_l = [collapse_distance_bound(float(l), 1.0) for l in grid]
        assert all(b > a for a, b in zip(in_s, in_s[1:]))
        assert all(b > a for a, b in zip(in_l, in_l[1:]))


class TestAccumulation:
    def test_bounds_follow_trajectory(self):
        report = accumulation_analysis(0.1, TWO_PI, 1.0, 10)
        for n, bound in enumerate(report.step_bounds):
            assert bound == pytest.approx((0.1 * 3.0**-n) ** 0.125, rel=1e-12)

    def test_consecutive_ratio_is_eighth_root_of_decay(self):
        report = accumulation_analysis(0.1, TWO_PI, 1.0, 10)
        for r in report.consecutive_ratios:
            assert r == pytest.approx(LIFT_Q_2PI, rel=1e-12)

    def test_slopes_exceed_one(self):
        report = accumulation_analysis(0.1, TWO_PI, 1.0, 5)
        assert all(a == pytest.approx(3.0, rel=1e-15) for a in report.slopes)
        assert all(o == TWO_PI for o in report.offsets)

    def test_tail_matches_closed_form(self):
        report = accumulation_analysis(0.1, TWO_PI, 1.0, 20)
        assert report.tail_sum == pytest.approx(report.tail_closed_form, rel=1e-12)

    def test_small_start_shrinks_bounds(self):
        big = accumulation_analysis(0.05, TWO_PI, 1.0, 5)
        small = accumulation_analysis(0.005, TWO_PI, 1.0, 5)
        assert all(s < b for s, b in zip(small.step_bounds, big.step_bounds))


class TestCounterexample:
    def test_starts_at_one(self):
        report = counterexample_ratio(0.05, 5)
        assert report.ratios[0] == 1.0

    def test_asymptotic_factor_two_thirds(self):
        report = counterexample_ratio(0.01, 12)
        factors = [b / a for a, b in zip(report.ratios, report.ratios[1:])]
        assert factors[-1] == pytest.approx(2.0 / 3.0, abs=0.01)

    def test_certified_divergence_within_twelve_steps(self):
        report = counterexample_ratio(0.05, 12)
        assert report.decreasing_from <= 2
        assert min(report.ratios) < 0.05

    def test_equal_weights_control_stays_at_one(self):
        state = LengthState(
            roles={"g1": Role.SUPPORT, "g2": Role.SUPPORT},
            lengths={
                "g1": LengthInterval.point(0.05),
                "g2": LengthInterval.point(0.05),
            },
        )
        lam = WeightedMulticurve({"g1": TWO_PI, "g2": TWO_PI})
        traj = iterate_grafting(state, lam, 12)
        for step in traj.steps:
            assert step.lengths["g2"].hi == step.lengths["g1"].hi


class TestEndpointDescriptor:
    def test_single_support_curve(self):
        desc = endpoint_descriptor(single_state(), WeightedMulticurve({"g": 1.0}))
        assert desc.cusp_pairs == ("g",)
        assert desc.boundary_count == 2

    def test_three_curves(self):
        state = LengthState(
            roles={
                "a": Role.SUPPORT,
                "b": Role.SUPPORT,
                "c": Role.SUPPORT,
                "d": Role.DISJOINT,
            },
            lengths={
                "a": LengthInterval.point(0.1),
                "b": LengthInterval.point(0.1),
                "c": LengthInterval.point(0.1),
                "d": LengthInterval(0.3, 0.4),
            },
        )
        lam = WeightedMulticurve({"a": 1.0, "b": 1.0, "c": 1.0})
        desc = endpoint_descriptor(state, lam)
        assert len(desc.cusp_pairs) == 3
        assert desc.boundary_count == 6
        assert desc.retained == {"d": LengthInterval(0.3, 0.4)}


class TestEndpointCauchy:
    def test_single_step_bound(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 1)
        report = endpoint_cauchy_analysis(traj, 1.0)
        assert report.step_bounds == (pytest.approx(0.1**0.125, rel=1e-14),)

    def test_ratio_and_tails(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 20)
        report = endpoint_cauchy_analysis(traj, 1.0)
        for r in report.consecutive_ratios:
            assert r == pytest.approx(report.expected_ratio, abs=1e-10)
        for got, closed in zip(report.tail_sums, report.tail_closed_forms):
            assert got == pytest.approx(closed, rel=1e-12)

    def test_tail_after_m_below_geometric_head(self):
        traj = iterate_grafting(single_state(), WeightedMulticurve({"g": TWO_PI}), 20)
        report = endpoint_cauchy_analysis(traj, 1.0)
        q = report.expected_ratio
        for m in range(len(report.step_bounds)):
            assert report.tail_sums[m] <= report.step_bounds[m] / (1.0 - q) + 1e-12

    def test_requires_iterate_mode(self):
        traj = ray_grafting(single_state(), WeightedMulticurve({"g": 1.0}), [1.0])
        with pytest.raises(ValueError):
            endpoint_cauchy_analysis(traj, 1.0)


class TestConvergenceThreshold:
    def test_frozen_value(self):
        assert geometric_convergence_threshold(0.1, 0.1) == pytest.approx(
            THRESHOLD_01_01, rel=1e-14
        )

    def test_vanishes_as_delta_to_one(self):
        assert geometric_convergence_threshold(0.1, 1.0 - 1e-9) < 1e-9

    def test_linear_in_l(self):
        base = geometric_convergence_threshold(0.05, 0.3)
        assert geometric_convergence_threshold(0.1, 0.3) == pytest.approx(
            2.0 * base, rel=1e-13
        )

    def test_rejects_bad_delta(self):
        with pytest.raises(ValueError):
            geometric_convergence_threshold(0.1, 1.0)
        with pytest.raises(ValueError):
            geometric_convergence_threshold(0.1, 0.0)
