"""Backend equivalence: numba kernels against the pure-numpy implementations."""

import os
import subprocess
import sys

import numpy as np
import pytest

from nmcoherence import _accel


def _random_kernel_data(n=300, seed=3):
    rng = np.random.default_rng(seed)
    decay = np.exp(-0.05 * np.arange(n + 1))
    A = (rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)) * 1e-3 * decay
    B = (rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)) * 1e-3 * decay
    a0 = complex(rng.normal() * 1e-3, rng.normal() * 1e-3)
    b0 = complex(rng.normal() * 1e-3, rng.normal() * 1e-3)
    return A, B, a0, b0


needs_numba = pytest.mark.skipif(not _accel.NUMBA_ENABLED,
                                 reason="numba backend unavailable")


class TestBackendSelection:
    def test_backend_name(self):
        assert _accel.backend() in ("numba", "numpy")

    def test_env_flag_forces_numpy(self):
        code = ("import nmcoherence._accel as m; "
                "print(m.backend())")
        env = dict(os.environ, NMCOHERENCE_DISABLE_NUMBA="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "numpy"


@needs_numba
class TestBackendEquivalence:
    def test_volterra_steps(self):
        A, B, a0, b0 = _random_kernel_data()
        n = len(A) - 1
        w_np = _accel.volterra_steps_numpy(A, B, a0, b0, 0.01, n)
        w_nb = _accel._volterra_steps_nb(A, B, a0, b0, 0.01, n)
        assert np.abs(w_np - w_nb).max() <= 1e-12

    def test_filon_accumulate(self):
        rng = np.random.default_rng(11)
        m, nf, stride = 40, 200, 4
        u = np.exp(-1j * 0.9 * 0.01 * np.arange(nf + 1)) * \
            np.exp(-0.002 * np.arange(nf + 1))
        q = np.exp(1j * rng.uniform(0, 0.5, m))
        c0 = rng.normal(size=m) + 1j * rng.normal(size=m)
        c1 = rng.normal(size=m) + 1j * rng.normal(size=m)
        kw = np.abs(rng.normal(size=m))
        v_np = _accel.filon_accumulate_numpy(u, 0.01, q, c0, c1, kw, stride,
                                             nf // stride)
        v_nb = _accel._filon_accumulate_nb(u, 0.01, q, c0, c1, kw, stride,
                                           nf // stride)
        assert np.abs(v_np - v_nb).max() <= 1e-12 * max(1.0, np.abs(v_np).max())

    def test_v_double_sum(self):
        rng = np.random.default_rng(5)
        n = 120
        u = np.exp(-1j * np.arange(n + 1) * 0.01) * \
            np.exp(-0.01 * np.arange(n + 1))
        lags = np.arange(n + 1) * 0.01
        gt = (1.0 + 0.5j * lags) ** -1.5 * 0.3
        idx = np.array([0, 13, 60, 120], dtype=np.int64)
        v_np, r_np = _accel.v_double_sum_numpy(u, gt, 0.01, idx)
        v_nb, r_nb = _accel._v_double_sum_nb(u, gt, 0.01, idx)
        assert np.abs(v_np - v_nb).max() <= 1e-11 * max(1.0, np.abs(v_np).max())
        assert r_np <= 1e-10 and r_nb <= 1e-10
