#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends (numba jit vs pure numpy).

Run:  python3 benchmarks/bench_kernels.py [--t-max 50] [--repeat 3]

The numba path must be available for the comparison; re-running with
NMCOHERENCE_DISABLE_NUMBA=1 exercises the numpy fallback end to end instead.
"""

import argparse
import time

import numpy as np

from nmcoherence import BathSpec, TimeGrid, backend
from nmcoherence import _accel
from nmcoherence.greens import (_filon_coefficients, _panel_moments,
                                frequency_grid)
from nmcoherence.bath import bose_occupation, thermal_kernel


def timeit(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-max", type=float, default=50.0)
    ap.add_argument("--dt", type=float, default=0.01)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    spec = BathSpec.from_relative(2.0, 0.5, 5.0, 20.0)
    grid = TimeGrid.make(args.dt, args.t_max)
    n = grid.n_steps
    print(f"active backend: {backend()}   (n_steps={n})")

    pairs = []
    A, B, a0, b0 = _panel_moments(spec, grid.dt, n)
    pairs.append(("volterra_steps",
                  lambda: _accel.volterra_steps_numpy(A, B, a0, b0, grid.dt, n),
                  (lambda: _accel._volterra_steps_nb(A, B, complex(a0),
                                                     complex(b0), grid.dt, n))
                  if _accel.NUMBA_ENABLED else None))

    u = _accel.volterra_steps_numpy(A, B, a0, b0, grid.dt, n) \
        * np.exp(-1j * grid.times)
    nodes, jw = frequency_grid(spec, grid.t_max)
    kw = jw * bose_occupation(spec, nodes)
    q, c0, c1 = _filon_coefficients(nodes, grid.dt)
    print(f"frequency nodes: {len(nodes)}")
    pairs.append(("filon_accumulate",
                  lambda: _accel.filon_accumulate_numpy(u, grid.dt, q, c0, c1,
                                                        kw, 1, n),
                  (lambda: _accel._filon_accumulate_nb(u, grid.dt, q, c0, c1,
                                                       kw, 1, n))
                  if _accel.NUMBA_ENABLED else None))

    gt = thermal_kernel(spec, np.arange(n + 1) * grid.dt)
    idx = np.arange(0, n + 1, max(1, n // 10), dtype=np.int64)
    pairs.append(("v_double_sum",
                  lambda: _accel.v_double_sum_numpy(u, gt, grid.dt, idx),
                  (lambda: _accel._v_double_sum_nb(u, gt, grid.dt, idx))
                  if _accel.NUMBA_ENABLED else None))

    print(f"{'kernel':<18}{'numpy':>12}{'numba':>12}{'speedup':>10}{'max diff':>12}")
    for name, f_np, f_nb in pairs:
        t_np, out_np = timeit(f_np, args.repeat)
        if f_nb is None:
            print(f"{name:<18}{t_np:>11.3f}s{'n/a':>12}{'':>10}")
            continue
        f_nb()  # jit warmup
        t_nb, out_nb = timeit(f_nb, args.repeat)
        a = out_np[0] if isinstance(out_np, tuple) else out_np
        b = out_nb[0] if isinstance(out_nb, tuple) else out_nb
        diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
        print(f"{name:<18}{t_np:>11.3f}s{t_nb:>11.3f}s{t_np / t_nb:>9.1f}x"
              f"{diff:>12.2e}")


if __name__ == "__main__":
    main()
