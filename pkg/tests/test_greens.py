"""Green's-function solver tests (fast variants; the heavy 12-corner oracle
matrix lives in test_acceptance)."""

import numpy as np
import pytest

from nmcoherence import (BathSpec, GreensTrajectory, TimeGrid, solve_greens,
                         solve_u, solve_v)
from nmcoherence.errors import PhysicalityError


def strong_ohmic(temperature=0.0):
    return BathSpec.from_relative(2.0, 1.0, 5.0, temperature)


class TestTimeGrid:
    def test_make(self):
        grid = TimeGrid.make(dt=0.01, t_max=50.0)
        assert grid.n_steps == 5000
        assert grid.times[0] == 0.0
        assert grid.times[-1] == pytest.approx(50.0)

    def test_inconsistent_rejected(self):
        with pytest.raises(ValueError):
            TimeGrid(dt=0.01, t_max=50.0, n_steps=4000)
        with pytest.raises(ValueError):
            TimeGrid(dt=-0.01, t_max=50.0, n_steps=5000)


class TestSolveU:
    def test_initial_condition(self):
        u = solve_u(strong_ohmic(), TimeGrid.make(0.01, 2.0))
        assert u[0] == 1.0

    def test_decoupled_is_pure_phase(self):
        spec = BathSpec(eta=0.0, s=1.0, omega_c=5.0)
        grid = TimeGrid.make(0.01, 20.0)
        u = solve_u(spec, grid)
        assert np.abs(u - np.exp(-1j * grid.times)).max() < 1e-12

    def test_amplitude_bound(self):
        grid = TimeGrid.make(0.01, 20.0)
        for s in (0.5, 1.0, 3.0):
            u = solve_u(BathSpec.from_relative(2.0, s, 5.0), grid)
            assert np.abs(u).max() <= 1.0 + 1e-6

    def test_weak_coupling_monotone_decay(self):
        grid = TimeGrid.make(0.01, 50.0)
        for s in (0.5, 1.0, 3.0):
            u = solve_u(BathSpec.from_relative(0.01, s, 5.0), grid)
            steps = np.diff(np.abs(u))
            assert steps.max() <= 1e-6

    def test_grid_refinement_second_order(self):
        # successive dt-halvings shrink the change by ~4 (ratio within 25%)
        spec = strong_ohmic()
        runs = {}
        for dt in (0.02, 0.01, 0.005):
            grid = TimeGrid.make(dt, 10.0)
            runs[dt] = solve_u(spec, grid, refine=1)
        d1 = np.abs(runs[0.02][::1] - runs[0.01][::2]).max()
        d2 = np.abs(runs[0.01][::1] - runs[0.005][::2]).max()
        assert 3.0 <= d1 / d2 <= 5.0

    def test_deterministic(self):
        spec = strong_ohmic(1.0)
        grid = TimeGrid.make(0.01, 5.0)
        a = solve_u(spec, grid)
        b = solve_u(spec, grid)
        assert np.array_equal(a, b)


class TestSolveV:
    def test_zero_time_and_zero_temperature(self):
        spec = strong_ohmic(0.0)
        grid = TimeGrid.make(0.01, 5.0)
        u = solve_u(spec, grid)
        v = solve_v(spec, grid, u)
        assert len(v) == grid.n_steps + 1
        assert np.all(v == 0.0)
        # the cold time path mirrors its default stride semantics
        assert len(solve_v(spec, grid, u, method="time")) == grid.n_steps // 10 + 1

    def test_nonnegative_and_zero_start(self):
        spec = strong_ohmic(1.0)
        grid = TimeGrid.make(0.01, 10.0)
        traj = solve_greens(spec, grid)
        assert traj.v[0] == 0.0
        assert traj.v.min() >= -1e-9

    @pytest.mark.parametrize("s,temp", [(1.0, 1.0), (0.5, 20.0)])
    def test_frequency_and_time_paths_agree(self, s, temp):
        spec = BathSpec.from_relative(2.0, s, 5.0, temp)
        grid = TimeGrid.make(0.01, 10.0)
        u = solve_u(spec, grid)
        idx = [0, 200, 500, 1000]
        v_freq = solve_v(spec, grid, u, method="frequency", output_indices=idx)
        v_time = solve_v(spec, grid, u, method="time", output_indices=idx)
        scale = max(1.0, float(np.max(v_freq)))
        assert np.abs(v_freq - v_time).max() <= 2e-3 * scale

    def test_output_indices_default_stride(self):
        spec = strong_ohmic(1.0)
        grid = TimeGrid.make(0.01, 2.0)
        u = solve_u(spec, grid)
        v = solve_v(spec, grid, u, method="time")
        assert len(v) == grid.n_steps // 10 + 1

    def test_wrong_grid_rejected(self):
        spec = strong_ohmic(1.0)
        grid = TimeGrid.make(0.01, 2.0)
        with pytest.raises(ValueError):
            solve_v(spec, grid, np.ones(17, dtype=complex))


class TestTrajectory:
    def test_validate_rejects_tampered_data(self):
        spec = strong_ohmic(1.0)
        grid = TimeGrid.make(0.01, 2.0)
        traj = solve_greens(spec, grid)
        bad = GreensTrajectory(grid=grid, u=traj.u * 1.5, v=traj.v)
        with pytest.raises(PhysicalityError):
            bad.validate()
        bad = GreensTrajectory(grid=grid, u=traj.u, v=traj.v - 1e-3)
        with pytest.raises(PhysicalityError):
            bad.validate()

    def test_solve_greens_matches_components(self):
        spec = strong_ohmic(1.0)
        grid = TimeGrid.make(0.01, 5.0)
        traj = solve_greens(spec, grid, refine=1)
        assert np.array_equal(traj.u, solve_u(spec, grid, refine=1))
        v = solve_v(spec, grid, traj.u, method="frequency")
        assert np.abs(traj.v - v).max() < 1e-12
