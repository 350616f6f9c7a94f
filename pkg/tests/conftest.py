"""Shared fixtures: lazily-built scenario corners reused across acceptance tests."""

import numpy as np
import pytest

from nmcoherence import (BathSpec, DiscreteBath, GaussianInit, TimeGrid,
                         coherence_trajectory, exact_u, exact_v, solve_greens)

OMEGA_C = 5.0
S_VALUES = (0.5, 1.0, 3.0)
ETA_RELS = (0.01, 2.0)
TEMPS = (1.0, 20.0)
CORNERS = [(s, er, t) for s in S_VALUES for er in ETA_RELS for t in TEMPS]

PANEL_STATES = ((1.0, 0.5), (2.0, 1.0))


class CornerData:
    def __init__(self, spec, grid, traj, u_oracle, v_oracle):
        self.spec = spec
        self.grid = grid
        self.traj = traj
        self.u_oracle = u_oracle
        self.v_oracle = v_oracle
        self._coh = {}

    def coherence(self, alpha, r, n_bar):
        key = (alpha, r, n_bar)
        if key not in self._coh:
            self._coh[key] = coherence_trajectory(
                GaussianInit(alpha=alpha, r=r, n_bar=n_bar), self.traj)
        return self._coh[key]


class CornerCache:
    """Builds each (s, eta_rel, T) corner once; the discrete bath is shared
    across temperatures since its layout does not depend on T."""

    def __init__(self):
        self.grid = TimeGrid.make(dt=0.01, t_max=50.0)
        self._baths = {}
        self._corners = {}

    def bath(self, s, eta_rel):
        key = (s, eta_rel)
        if key not in self._baths:
            spec0 = BathSpec.from_relative(eta_rel, s, OMEGA_C, 0.0)
            self._baths[key] = DiscreteBath.from_spec(spec0, n_modes=2000,
                                                      t_horizon=self.grid.t_max)
        return self._baths[key]

    def get(self, s, eta_rel, temperature) -> CornerData:
        key = (s, eta_rel, temperature)
        if key not in self._corners:
            spec = BathSpec.from_relative(eta_rel, s, OMEGA_C, temperature)
            traj = solve_greens(spec, self.grid)
            db = self.bath(s, eta_rel)
            times = self.grid.times
            self._corners[key] = CornerData(
                spec, self.grid, traj,
                u_oracle=np.asarray(exact_u(db, times)),
                v_oracle=np.asarray(exact_v(db, temperature, times)))
        return self._corners[key]


@pytest.fixture(scope="session")
def corners():
    return CornerCache()
