"""Discrete-mode and truncated-Fock oracle self-checks."""

import numpy as np
import pytest
from scipy.integrate import quad

from nmcoherence import (BathSpec, DiscreteBath, GaussianInit, exact_u, exact_v,
                         fock_moments_entropy_coherence, fock_state, gaussian,
                         spectral_density)
from nmcoherence.errors import TruncationError


class TestDiscreteBath:
    def test_rabi_single_mode(self):
        v = 0.35
        db = DiscreteBath(mode_freqs=np.array([1.0]), couplings=np.array([v]))
        for t in (0.0, 0.5, 2.0, 7.0):
            expected = np.exp(-1j * t) * np.cos(v * t)
            assert exact_u(db, t) == pytest.approx(expected, abs=1e-12)

    def test_initial_conditions(self):
        spec = BathSpec.from_relative(2.0, 1.0, 5.0, 1.0)
        db = DiscreteBath.from_spec(spec, n_modes=600, t_horizon=10.0)
        assert exact_u(db, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert exact_v(db, 1.0, 0.0) == pytest.approx(0.0, abs=1e-12)
        assert exact_v(db, 0.0, 3.0) == 0.0

    def test_amplitude_bound(self):
        spec = BathSpec.from_relative(2.0, 0.5, 5.0, 0.0)
        db = DiscreteBath.from_spec(spec, n_modes=600, t_horizon=10.0)
        t = np.linspace(0.0, 10.0, 300)
        assert np.abs(exact_u(db, t)).max() <= 1.0 + 1e-12

    def test_propagator_unitarity(self):
        spec = BathSpec.from_relative(2.0, 1.0, 5.0, 0.0)
        db = DiscreteBath.from_spec(spec, n_modes=400, t_horizon=8.0)
        _, evecs = db.eigensystem()
        gram = evecs.T @ evecs
        assert np.abs(gram - np.eye(len(gram))).max() <= 1e-10

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_spectral_weight_capture(self, s):
        spec = BathSpec.from_relative(2.0, s, 5.0, 0.0)
        db = DiscreteBath.from_spec(spec, n_modes=2000)
        total = quad(lambda w: spectral_density(spec, w), 0.0, np.inf,
                     limit=300)[0]
        assert np.sum(db.couplings**2) == pytest.approx(total, rel=1e-2)

    def test_too_few_modes_rejected(self):
        spec = BathSpec.from_relative(2.0, 1.0, 5.0, 0.0)
        with pytest.raises(ValueError):
            DiscreteBath.from_spec(spec, n_modes=300, t_horizon=50.0)

    def test_discretization_convergence(self):
        # doubling the mode count moves exact_u by less than the acceptance
        # tolerance budget
        spec = BathSpec.from_relative(2.0, 1.0, 5.0, 0.0)
        t = np.linspace(0.0, 50.0, 501)
        u1 = exact_u(DiscreteBath.from_spec(spec, n_modes=2000), t)
        u2 = exact_u(DiscreteBath.from_spec(spec, n_modes=4000), t)
        assert np.abs(u1 - u2).max() <= 2e-4


class TestFockState:
    def test_thermal_diagonal(self):
        st = fock_state(GaussianInit(n_bar=1.0), cutoff=60)
        n = np.arange(st.cutoff + 1)
        expected = 0.5**(n + 1)
        assert np.abs(st.density.diagonal().real - expected).max() <= 1e-12
        off = st.density - np.diag(st.density.diagonal())
        assert np.abs(off).max() <= 1e-12

    def test_coherent_poisson(self):
        st = fock_state(GaussianInit(alpha=1.0), cutoff=60)
        n = np.arange(21)
        from math import factorial
        expected = np.array([np.exp(-1.0) / factorial(k) for k in n])
        assert np.abs(st.density.diagonal().real[:21] - expected).max() <= 1e-10

    def test_unit_trace(self):
        st = fock_state(GaussianInit(alpha=1.0, r=0.5, n_bar=1.0))
        assert np.trace(st.density).real == pytest.approx(1.0, abs=1e-10)

    def test_auto_raise_and_truncation_error(self):
        st = fock_state(GaussianInit(alpha=3.0), cutoff=20)
        assert st.cutoff > 20
        with pytest.raises(TruncationError):
            fock_state(GaussianInit(alpha=6.0), cutoff=10, max_cutoff=12)


class TestFockVsClosedForm:
    def test_thermal_coherence_zero(self):
        _, _, coh = fock_moments_entropy_coherence(fock_state(GaussianInit(n_bar=1.0)))
        assert abs(coh) <= 1e-9

    def test_displaced_vacuum_two_bits(self):
        _, _, coh = fock_moments_entropy_coherence(fock_state(GaussianInit(alpha=1.0)))
        assert coh == pytest.approx(2.0, abs=1e-6)

    def test_grid_agreement(self):
        worst = 0.0
        for a in (0.0, 0.5, 1.0):
            for r in (0.0, 0.25, 0.5):
                for nb in (0.0, 0.5, 1.0):
                    init = GaussianInit(alpha=a, r=r, n_bar=nb)
                    mom, ent, coh = fock_moments_entropy_coherence(
                        fock_state(init, cutoff=80))
                    m0 = gaussian.initial_moments(init)
                    nu0 = 2.0 * nb + 1.0
                    worst = max(worst,
                                abs(mom.mean_a - m0.mean_a),
                                abs(mom.var_a - m0.var_a),
                                abs(mom.cov_adag_a - m0.cov_adag_a),
                                abs(ent - gaussian.entropy(nu0)),
                                abs(coh - gaussian.coherence(nu0, m0.photon_number)))
        assert worst <= 1e-6
