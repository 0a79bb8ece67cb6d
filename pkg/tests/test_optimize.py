import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import junglesim as js
from junglesim.oracles import power_grid_argmax, technology_grid_argmax

QUARTER = js.quadratic(0.25)
SQUARE = js.quadratic(1.0)
SQRT2 = js.power(2.0, 0.5)


class TestTechnology:
    def test_interior_optimum_marginal_return_one(self):
        sol = js.optimize_technology(SQRT2, 10.0)
        assert sol.theta_star == pytest.approx(1.0, abs=1e-6)
        assert sol.extracted == pytest.approx(2.0, abs=1e-6)
        assert sol.net == pytest.approx(1.0, abs=1e-6)
        assert not sol.corner and not sol.degenerate
        t_grid, _ = technology_grid_argmax(SQRT2, 10.0)
        assert abs(sol.theta_star - t_grid) <= 1e-4

    def test_corner_minimal_investment_extracting_everything(self):
        sol = js.optimize_technology(SQRT2, 1.5)
        assert sol.theta_star == pytest.approx(0.5625, abs=1e-6)
        assert sol.net == pytest.approx(0.9375, abs=1e-6)
        assert sol.corner
        t_grid, _ = technology_grid_argmax(SQRT2, 1.5)
        assert abs(sol.theta_star - t_grid) <= 1e-4

    def test_unit_slope_ties_to_minimal_investment(self):
        sol = js.optimize_technology(js.linear(1.0), 5.0)
        assert sol.theta_star == 0.0
        assert sol.net == 0.0
        assert not sol.degenerate

    def test_investment_never_pays_is_degenerate(self):
        sol = js.optimize_technology(js.linear(0.5), 5.0)
        assert sol.theta_star == 0.0
        assert sol.net == 0.0
        assert sol.degenerate

    def test_corner_hits_the_stock_tightly(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            a = float(rng.uniform(0.5, 4.0))
            b = float(rng.uniform(0.2, 0.9))
            r = js.power(a, b)
            # pick a stock below the unconstrained extraction to force a corner
            unconstrained = js.optimize_technology(r, 1e12)
            if unconstrained.extracted <= 1e-6:
                continue
            x_total = float(rng.uniform(0.1, 0.9)) * unconstrained.extracted
            sol = js.optimize_technology(r, x_total)
            assert sol.corner
            assert abs(js.evaluate(r, sol.theta_star) - x_total) < 1e-8

    def test_log_extraction_interior(self):
        r = js.log(3.0, 1.0)  # marginal 3/(1+t): crosses 1 at t = 2
        sol = js.optimize_technology(r, 100.0)
        assert sol.theta_star == pytest.approx(2.0, abs=1e-6)
        t_grid, _ = technology_grid_argmax(r, 100.0)
        assert abs(sol.theta_star - t_grid) <= 1e-4

    def test_domain_edge_with_marginal_return_above_one(self):
        # returns exceed one across the whole (bounded) investment range and
        # the stock is never reached: invest right up to the edge
        r = js.linear(2.0, 0.0, domain=(0.0, 5.0))
        sol = js.optimize_technology(r, 100.0)
        assert sol.theta_star == pytest.approx(5.0)
        assert sol.net == pytest.approx(5.0)  # extract 10, invest 5
        assert not sol.corner and not sol.degenerate


class TestPower:
    def test_interior_optimum_uniform_endowment(self):
        sol = js.optimize_power(js.constant(1.0), SQUARE)
        assert sol.y_star == pytest.approx(0.5, abs=1e-3)
        assert sol.net_resources == pytest.approx(0.25, abs=1e-3)
        assert sol.condition_verdict == "none"
        assert not sol.boundary

    def test_boundary_optimum_quarter_cost(self):
        sol = js.optimize_power(js.constant(1.0), QUARTER)
        assert sol.y_star == pytest.approx(1.0)
        assert sol.net_resources == pytest.approx(0.75, abs=1e-3)
        assert sol.boundary
        assert sol.condition_verdict == "both"

    def test_interior_optimum_rising_endowment(self):
        sol = js.optimize_power(js.linear(2.0), js.power(1.0, 3.0))
        assert sol.y_star == pytest.approx(2.0 / 3.0, abs=1e-3)
        assert sol.net_resources == pytest.approx(4.0 / 27.0, abs=1e-3)

    def test_power_never_worth_acquiring(self):
        sol = js.optimize_power(js.constant(0.0), SQUARE)
        assert sol.y_star == 0.0
        assert sol.net_resources == 0.0

    def test_matches_brute_force_grid(self):
        rng = np.random.default_rng(21)
        from junglesim.scenario_io import descriptor_from_json, draw_descriptor

        for _ in range(1000):
            f = descriptor_from_json(draw_descriptor("endowment", rng), "f")
            c = descriptor_from_json(draw_descriptor("power-cost", rng), "c")
            sol = js.optimize_power(f, c)
            y_grid, net_grid = power_grid_argmax(f, c)
            assert abs(sol.y_star - y_grid) <= 1.1e-4
            assert sol.net_resources >= net_grid - 1e-9

    def test_interior_optimum_balances_marginals(self):
        rng = np.random.default_rng(5)
        from junglesim.scenario_io import descriptor_from_json, draw_descriptor

        checked = 0
        for _ in range(200):
            f = descriptor_from_json(draw_descriptor("endowment", rng), "f")
            c = descriptor_from_json(draw_descriptor("power-cost", rng), "c")
            sol = js.optimize_power(f, c)
            if not 1e-4 < sol.y_star < 1.0 - 1e-4:
                continue
            checked += 1
            gap = js.evaluate(f, sol.y_star) - js.derivative(c, sol.y_star)
            assert abs(gap) < 1e-4
        assert checked >= 20

    def test_objective_curve_is_sampled(self):
        sol = js.optimize_power(js.constant(1.0), SQUARE)
        assert 50 <= len(sol.objective_curve) <= 300
        ys = [y for y, _ in sol.objective_curve]
        assert ys[0] == 0.0 and ys[-1] == 1.0
        y_mid, b_mid = sol.objective_curve[len(sol.objective_curve) // 2]
        assert b_mid == pytest.approx(y_mid - y_mid**2, abs=1e-12)


class TestConditions:
    def test_condition_tags(self):
        assert js.check_prop2_conditions(js.constant(1.0), QUARTER) == "both"
        assert js.check_prop2_conditions(js.constant(1.0), SQUARE) == "none"
        assert js.check_prop2_conditions(js.constant(1.0), js.constant(0.0)) == "both"

    def test_condition_i_only(self):
        # f = 2s grows as fast as allowed: f' = 2 <= c'' = 2 with c = s^2,
        # and f(1) = 2 > c'(1) = 2 fails; steepen the endowment instead
        f = js.linear(1.0, 1.0)  # f = 1 + s, f' = 1
        c = js.quadratic(0.6)    # c'' = 1.2 >= 1, c'(1) = 1.2 < f(1) = 2
        verdict = js.check_prop2_conditions(f, c)
        assert verdict in ("prop2-i", "both")

    def test_condition_ii_without_concavity(self):
        # convex-enough benefit: f jumps above the marginal cost everywhere
        # while f' > c'' somewhere, so only the direct comparison holds
        f = js.piecewise_table([(0.0, 0.5), (0.5, 0.6), (0.6, 2.0), (1.0, 2.2)])
        c = js.quadratic(0.2)
        assert js.check_prop2_conditions(f, c) == "prop2-ii"
        sol = js.optimize_power(f, c)
        assert sol.y_star == pytest.approx(1.0, abs=1e-4)

    def test_sufficient_conditions_force_the_boundary(self):
        rng = np.random.default_rng(17)
        from junglesim.scenario_io import descriptor_from_json, draw_descriptor

        hits = 0
        for _ in range(400):
            f = descriptor_from_json(draw_descriptor("endowment", rng), "f")
            c = descriptor_from_json(draw_descriptor("power-cost", rng), "c")
            verdict = js.check_prop2_conditions(f, c)
            if verdict == "none":
                continue
            hits += 1
            sol = js.optimize_power(f, c)
            assert abs(sol.y_star - 1.0) <= 1e-4, (f, c, verdict, sol.y_star)
        assert hits >= 40


class TestPath:
    def test_quarter_cost_reaches_full_power(self):
        res = js.simulate_accumulation_path(js.constant(1.0), QUARTER, 1.0, 0.01, 1.0)
        assert res.feasible and res.first_failure is None
        assert len(res.trajectory) == 101
        levels = [s.level for s in res.trajectory]
        assert levels[0] == 0.0 and levels[-1] == 1.0
        steps = np.diff(levels)
        assert np.allclose(steps, 0.01)

    def test_positive_cost_at_zero_fails_immediately(self):
        cost = js.quadratic(1.0, 0.0, 0.5)
        res = js.simulate_accumulation_path(js.constant(1.0), cost, 1.0, 0.01)
        assert not res.feasible
        assert res.first_failure == 0

    def test_no_endowments_and_positive_cost_fails_first_step(self):
        res = js.simulate_accumulation_path(js.constant(0.0), SQUARE, 1.0, 0.1, 0.0)
        assert not res.feasible
        assert res.first_failure == 0

    def test_trajectory_records_cost_of_next_level(self):
        res = js.simulate_accumulation_path(js.constant(1.0), QUARTER, 0.3, 0.1, 1.0)
        first = res.trajectory[0]
        assert first.level == 0.0
        assert first.cumulative_resources == 0.0
        assert first.next_step_cost == pytest.approx(0.25 * 0.1**2)
        assert res.trajectory[-1].next_step_cost is None

    @given(kappa=st.floats(0.0, 2.0), bump=st.floats(0.001, 3.0))
    @settings(max_examples=60, deadline=None)
    def test_more_slack_never_breaks_a_feasible_path(self, kappa, bump):
        f = js.linear(1.0)
        c = js.quadratic(0.8)
        base = js.simulate_accumulation_path(f, c, 1.0, 0.05, kappa)
        if base.feasible:
            more = js.simulate_accumulation_path(f, c, 1.0, 0.05, kappa + bump)
            assert more.feasible

    def test_auto_slack_uses_steepest_marginal_cost(self):
        assert js.default_path_slack(SQUARE) == pytest.approx(2.0)
        assert js.default_path_slack(QUARTER) == pytest.approx(0.5)

    def test_rejects_bad_step_configuration(self):
        with pytest.raises(ValueError):
            js.simulate_accumulation_path(js.constant(1.0), SQUARE, 0.5, 0.6)
        with pytest.raises(ValueError):
            js.simulate_accumulation_path(js.constant(1.0), SQUARE, 1.0, 0.0)
