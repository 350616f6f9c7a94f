"""Quantum-Langevin Green's functions: the Volterra equation for u(t) and the
thermal fluctuation v(t).

The u equation is solved in the frame rotating at the system frequency, where
the bare phase drops out exactly (u is exact for a decoupled system at any
step size). History integrals use product integration: the rotated kernel is
integrated exactly against a piecewise-linear representation of the unknown,
stepped with the implicit midpoint rule (second order overall).
"""

from dataclasses import dataclass

import numpy as np

from . import _accel
from ._quad import _leggauss, panel_nodes, power_head_nodes
from .bath import OMEGA0, BathSpec, bose_occupation, memory_kernel, spectral_density, thermal_kernel
from .errors import InternalConsistencyError, PhysicalityError, SolverDivergenceError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output grid; uniformity is required by the convolution solver."""

    dt: float
    t_max: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0 or self.t_max <= 0:
            raise ValueError("dt and t_max must be positive")
        if abs(self.n_steps * self.dt - self.t_max) > 1e-9 * max(1.0, self.t_max):
            raise ValueError("n_steps * dt must equal t_max")

    @classmethod
    def make(cls, dt: float = 0.01, t_max: float = 50.0) -> "TimeGrid":
        n = int(round(t_max / dt))
        return cls(dt=dt, t_max=n * dt, n_steps=n)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass
class GreensTrajectory:
    grid: TimeGrid
    u: np.ndarray
    v: np.ndarray

    def validate(self):
        if self.u[0] != 1.0:
            raise PhysicalityError("u(0) must be exactly 1")
        if self.v[0] != 0.0:
            raise PhysicalityError("v(0) must be exactly 0")
        amax = np.abs(self.u).max()
        if amax > 1.0 + 1e-6:
            raise PhysicalityError(f"|u| exceeded 1 by {amax - 1.0:.3e}")
        vmin = self.v.min()
        if vmin < -1e-9:
            raise PhysicalityError(f"v dropped below 0 by {-vmin:.3e}")
        return self


def _rotated_kernel(spec: BathSpec, x: np.ndarray) -> np.ndarray:
    return memory_kernel(spec, x) * np.exp(1j * OMEGA0 * x)


def _panel_moments(spec: BathSpec, dt: float, n: int, order: int = 8):
    """Moments of the rotated kernel against linear hats, midpoint layout.

    Full panels sit at lag windows [(l-1/2)dt, (l+1/2)dt] for l = 1..n; the
    trailing half panel covers lags [0, dt/2]. All integrals via per-panel
    Gauss-Legendre on the smooth rotated kernel.
    """
    xg, wg = _leggauss(order)
    sig = 0.5 * dt * (xg + 1.0)
    wsig = 0.5 * dt * wg
    lag_hi = (np.arange(1, n + 1) + 0.5)[:, None] * dt
    k = _rotated_kernel(spec, lag_hi - sig[None, :])
    A = np.zeros(n + 1, dtype=complex)
    B = np.zeros(n + 1, dtype=complex)
    A[1:] = k @ ((1.0 - sig / dt) * wsig)
    B[1:] = k @ ((sig / dt) * wsig)
    sig_h = 0.25 * dt * (xg + 1.0)
    wsig_h = 0.25 * dt * wg
    kh = _rotated_kernel(spec, 0.5 * dt - sig_h)
    a0 = complex(np.dot(kh, (1.0 - sig_h / dt) * wsig_h))
    b0 = complex(np.dot(kh, (sig_h / dt) * wsig_h))
    return A, B, a0, b0


def solve_u(spec: BathSpec, grid: TimeGrid, refine: int = 4) -> np.ndarray:
    """Solve du/dt = -i*omega_0*u - (g * u)(t), u(0) = 1, on the grid.

    ``refine`` is the internal substep factor; the result is always reported
    on the caller's grid and the scheme stays second order in grid.dt.
    """
    u = _solve_u_fine(spec, grid, refine)[::refine]
    bad = np.nonzero(~np.isfinite(u))[0]
    if bad.size:
        raise SolverDivergenceError(f"non-finite u at step {bad[0]} "
                                    f"(t = {bad[0] * grid.dt:.4g})")
    return u


def _solve_u_fine(spec: BathSpec, grid: TimeGrid, refine: int) -> np.ndarray:
    if refine < 1:
        raise ValueError("refine must be >= 1")
    dtf = grid.dt / refine
    nf = grid.n_steps * refine
    A, B, a0, b0 = _panel_moments(spec, dtf, nf)
    w = _accel.volterra_steps(A, B, a0, b0, dtf, nf)
    return w * np.exp(-1j * OMEGA0 * dtf * np.arange(nf + 1))


def frequency_grid(spec: BathSpec, t_max: float, freq_refine: float = 1.0,
                   head_order: int = 48, panel_order: int = 16):
    """Quadrature nodes/weights over omega for the fluctuation integral.

    A Gauss-Jacobi head absorbs the w^(s-1) endpoint behavior of J*n; beyond
    it, composite Gauss-Legendre panels sized to resolve e^{i w t_max}.
    """
    w_head = 0.3
    nodes_h, weights_h = power_head_nodes(spec.s, w_head,
                                          int(round(head_order * freq_refine)))
    weights_h = weights_h * spectral_density(spec, nodes_h)
    # envelope cutoff where J*n (J at T=0) is negligible
    wscan = np.linspace(w_head, 60.0 * spec.omega_c, 4000)
    env = spectral_density(spec, wscan)
    if spec.temperature > 0.0:
        env = env * bose_occupation(spec, wscan)
    keep = np.nonzero(env > 1e-10 * env.max())[0]
    w_max = max(float(wscan[keep[-1]]) if keep.size else 2.0 * spec.omega_c, 3.0)
    width = min(0.3, 14.0 / max(t_max, 1.0)) / freq_refine
    n_pan = int(np.ceil((w_max - w_head) / width))
    nodes_t, weights_t = panel_nodes(np.linspace(w_head, w_max, n_pan + 1), panel_order)
    weights_t = weights_t * spectral_density(spec, nodes_t)
    return (np.concatenate([nodes_h, nodes_t]),
            np.concatenate([weights_h, weights_t]))


def _filon_coefficients(nodes: np.ndarray, dt: float):
    """Exact panel integrals of e^{i w tau} against the linear hats."""
    z = 1j * nodes * dt
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    ez = np.exp(z)
    c0 = np.where(small, 0.5 + z / 6.0 + z * z / 24.0, (ez - 1.0 - zs) / zs**2)
    c1 = np.where(small, 0.5 + z / 3.0 + z * z / 8.0, (zs * ez - ez + 1.0) / zs**2)
    return ez, c0, c1


def solve_v(spec: BathSpec, grid: TimeGrid, u: np.ndarray, method: str = "frequency",
            output_indices=None, freq_refine: float = 1.0) -> np.ndarray:
    """Thermal fluctuation v(t) >= 0 from the already-solved amplitude u.

    method="frequency": v(t) = int J*n*|int_0^t u(tau) e^{i w tau} dtau|^2 dw
    with the inner transform updated incrementally per step (full trajectory).
    method="time": double trapezoidal sum over thermal-kernel lags, evaluated
    at ``output_indices`` (default every 10th point); cross-validates the
    frequency path.
    """
    if len(u) != grid.n_steps + 1:
        raise ValueError("u must be sampled on the grid")
    if method not in ("frequency", "time"):
        raise ValueError(f"unknown method {method!r}")
    if output_indices is None and method == "time":
        output_indices = np.arange(0, grid.n_steps + 1, 10)
    if spec.temperature == 0.0:
        return np.zeros(grid.n_steps + 1 if output_indices is None
                        else len(output_indices))
    if method == "frequency":
        nodes, jw = frequency_grid(spec, grid.t_max, freq_refine)
        kw = jw * bose_occupation(spec, nodes)
        q, c0, c1 = _filon_coefficients(nodes, grid.dt)
        v = _accel.filon_accumulate(np.ascontiguousarray(u, dtype=complex), grid.dt,
                                    q, c0, c1, kw, 1, grid.n_steps)
        if output_indices is not None:
            v = v[np.asarray(output_indices)]
        return v
    idx = np.asarray(output_indices, dtype=np.int64)
    gt = thermal_kernel(spec, np.arange(grid.n_steps + 1) * grid.dt)
    vals, resid = _accel.v_double_sum(np.ascontiguousarray(u, dtype=complex),
                                      np.ascontiguousarray(gt), grid.dt, idx)
    scale = max(1.0, float(np.max(np.abs(vals))) if len(vals) else 1.0)
    if resid > 1e-8 * scale:
        raise InternalConsistencyError(
            f"imaginary residue {resid:.3e} in time-domain v")
    return vals


def solve_greens(spec: BathSpec, grid: TimeGrid, refine: int = 4,
                 freq_refine: float = 1.0) -> GreensTrajectory:
    """Solve both Green's functions, sharing the internally refined u."""
    uf = _solve_u_fine(spec, grid, refine)
    bad = np.nonzero(~np.isfinite(uf))[0]
    if bad.size:
        raise SolverDivergenceError(f"non-finite u at fine step {bad[0]}")
    u = uf[::refine]
    if spec.temperature == 0.0:
        v = np.zeros(grid.n_steps + 1)
    else:
        nodes, jw = frequency_grid(spec, grid.t_max, freq_refine)
        kw = jw * bose_occupation(spec, nodes)
        dtf = grid.dt / refine
        q, c0, c1 = _filon_coefficients(nodes, dtf)
        v = _accel.filon_accumulate(np.ascontiguousarray(uf), dtf, q, c0, c1,
                                    kw, refine, grid.n_steps)
    return GreensTrajectory(grid=grid, u=u, v=v).validate()
