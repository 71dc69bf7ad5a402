import io

import pytest

from ltenergy import (
    ConnectionlessScenario,
    CostSpec,
    SweepAxis,
    SweepSpec,
    compare,
    cost_curve,
    default_profile,
    per_cycle_payload,
    run_sweep,
)
from _goldens import reference_scenarios

PROFILE = default_profile()


def make_spec(axes, t_i=750, rtt_cloud=50):
    edge, cloud = reference_scenarios(t_i, rtt_cloud)
    return SweepSpec(base_edge=edge, base_cloud=cloud, axes=axes)


class TestAxis:
    def test_values_inclusive(self):
        axis = SweepAxis("t_i", 750, 5000, 250)
        values = axis.values()
        assert values[0] == 750
        assert values[-1] == 5000
        assert len(values) == 18

    def test_single_value(self):
        assert SweepAxis("t_i", 750, 750, 1).values() == [750]

    def test_bad_axis_name(self):
        with pytest.raises(ValueError, match="unknown sweep axis"):
            SweepAxis("rtt_edge", 1, 2, 1)

    def test_empty_grid(self):
        with pytest.raises(ValueError, match="empty grid"):
            SweepAxis("t_i", 100, 50, 1)

    def test_no_axes(self):
        with pytest.raises(ValueError, match="empty grid"):
            make_spec(())


class TestRunSweep:
    def test_single_cell_equals_compare(self):
        spec = make_spec((SweepAxis("rtt_cloud", 300, 300, 1),), t_i=750)
        result = run_sweep(spec, PROFILE)
        assert len(result.cells) == 1
        edge, cloud = reference_scenarios(750, 300)
        assert result.cells[0].result == compare(edge, cloud, PROFILE)

    def test_pointwise_identical_to_compare(self):
        spec = make_spec((
            SweepAxis("t_i", 750, 1250, 250),
            SweepAxis("rtt_cloud", 50, 300, 50),
        ))
        result = run_sweep(spec, PROFILE)
        for cell in result.cells:
            t_i, rtt_cloud = cell.values
            edge, cloud = reference_scenarios(t_i, rtt_cloud)
            assert cell.result == compare(edge, cloud, PROFILE)

    def test_period_sweep_sign_structure(self):
        spec = make_spec((
            SweepAxis("t_i", 750, 5000, 250),
            SweepAxis("rtt_cloud", 50, 300, 25),
        ))
        result = run_sweep(spec, PROFILE)
        by_point = {cell.values: cell.rho for cell in result.cells}
        assert by_point[(750.0, 300.0)] > 1
        assert by_point[(1000.0, 300.0)] < 1
        cloud_wins = [cell.values for cell in result.cells if cell.rho > 1]
        assert cloud_wins
        assert all(t_i < 1000 and rtt > 100 for t_i, rtt in cloud_wins)

    def test_payload_sweep_small_payloads_favor_edge(self):
        spec = make_spec((
            SweepAxis("payload", 2048, 262144, 2048),
            SweepAxis("rtt_cloud", 50, 300, 25),
        ), t_i=5000)
        result = run_sweep(spec, PROFILE)
        small = [c for c in result.cells if c.values[0] <= 16384]
        assert small and all(c.rho < 1 for c in small)
        # oversized payloads cannot fit the period against a distant
        # cloud; those cells are recorded as errors, not dropped
        errors = [c for c in result.cells if c.error is not None]
        assert errors
        assert all(c.values[0] > 200000 for c in errors)
        assert len(result.cells) == 128 * 11

    def test_elaboration_sweep_converges_to_parity(self):
        spec = make_spec((
            SweepAxis("t_elab", 0, 1500, 100),
            SweepAxis("rtt_cloud", 50, 300, 25),
        ), t_i=5000)
        result = run_sweep(spec, PROFILE)
        by_point = {cell.values: cell.rho for cell in result.cells}
        assert abs(by_point[(1500.0, 50.0)] - 1) < 0.02
        assert by_point[(0.0, 300.0)] < by_point[(1500.0, 300.0)] <= 1.0


class TestSweepOutput:
    def test_csv_columns_and_sentinel(self):
        spec = make_spec((
            SweepAxis("payload", 262144, 262144, 1),
            SweepAxis("rtt_cloud", 50, 300, 250),
        ), t_i=5000)
        result = run_sweep(spec, PROFILE)
        buf = io.StringIO()
        result.to_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == ("payload,rtt_cloud,rho,e_i_edge_mj,"
                            "e_i_cloud_mj,delta_rtt_ms,error")
        good = lines[1].split(",")
        assert good[2] != ""
        bad = lines[2].split(",")
        assert bad[2] == "" and "exceed" in bad[6]

    def test_emission_deterministic(self):
        spec = make_spec((SweepAxis("rtt_cloud", 50, 300, 25),))
        first, second = io.StringIO(), io.StringIO()
        run_sweep(spec, PROFILE).to_csv(first)
        run_sweep(spec, PROFILE).to_csv(second)
        assert first.getvalue() == second.getvalue()
        assert (run_sweep(spec, PROFILE).to_json_obj()
                == run_sweep(spec, PROFILE).to_json_obj())


class TestPerCyclePayload:
    def test_one_cycle_per_hour(self):
        assert per_cycle_payload(10e6, 3_600_000) == 10_000_000

    def test_direct_formula(self):
        assert per_cycle_payload(10e6, 36_000) == 100_000
        assert per_cycle_payload(10e6, 60_000) == 166_667

    def test_bad_period(self):
        with pytest.raises(ValueError):
            per_cycle_payload(10e6, 0)


class TestCostCurve:
    GRID = tuple(float(t) for t in range(1000, 120001, 1000))

    def test_delay_only_picks_smallest_period(self):
        spec = CostSpec(alpha=0.0, hourly_bytes=10e6, rtt=50,
                        t_i_grid=self.GRID)
        curve = cost_curve(spec, PROFILE)
        assert curve.argmin_t_i == 1000
        for point in curve.points:
            assert point.c == pytest.approx(point.t_i / curve.d_max)

    def test_single_point_cost_is_one(self):
        spec = CostSpec(alpha=0.3, hourly_bytes=10e6, rtt=50,
                        t_i_grid=(30_000.0,))
        curve = cost_curve(spec, PROFILE)
        assert curve.points[0].c == pytest.approx(1.0)

    def test_normalisers_are_grid_maxima(self):
        spec = CostSpec(alpha=0.5, hourly_bytes=10e6, rtt=50,
                        t_i_grid=self.GRID)
        curve = cost_curve(spec, PROFILE)
        assert curve.e_max == max(p.e_total for p in curve.points)
        assert curve.d_max == max(p.d for p in curve.points)
        assert all(0 <= p.c <= 1 + 1e-12 for p in curve.points)

    def test_cost_invariant_under_energy_rescaling(self):
        spec = CostSpec(alpha=0.5, hourly_bytes=10e6, rtt=50,
                        t_i_grid=self.GRID)
        curve = cost_curve(spec, PROFILE)
        for point in curve.points:
            joules = point.e_total / 1000.0
            rescaled = (spec.alpha * joules / (curve.e_max / 1000.0)
                        + (1 - spec.alpha) * point.d / curve.d_max)
            assert rescaled == pytest.approx(point.c, rel=1e-12)

    def test_argmin_monotone_in_alpha(self):
        argmins = []
        for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
            spec = CostSpec(alpha=alpha, hourly_bytes=10e6, rtt=50,
                            t_i_grid=self.GRID)
            argmins.append(cost_curve(spec, PROFILE).argmin_t_i)
        assert argmins == sorted(argmins)

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            CostSpec(alpha=1.5, hourly_bytes=1, rtt=50, t_i_grid=(1000.0,))

    def test_empty_grid(self):
        with pytest.raises(ValueError, match="empty grid"):
            CostSpec(alpha=0.5, hourly_bytes=1, rtt=50, t_i_grid=())
