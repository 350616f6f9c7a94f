"""Displaced squeezed thermal state: moments, covariance propagation, and the
relative entropy of coherence.

Quadrature convention: x = a + a(dag), p = -i(a - a(dag)), so the vacuum
covariance matrix is the identity and nu = sqrt(det V) >= 1. All entropic
quantities are in bits.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError
from .greens import GreensTrajectory

NU_CLAMP = 1e-6


@dataclass(frozen=True)
class GaussianInit:
    """Initial state D(alpha) S(r) rho_th(n_bar) S(r)+ D(alpha)+.

    Squeezing convention S(r) = exp[r (a^2 - a+^2) / 2] with real r, so
    positive r squeezes the x quadrature.
    """

    alpha: complex = 0.0
    r: float = 0.0
    n_bar: float = 0.0

    def __post_init__(self):
        if self.n_bar < 0:
            raise ValueError(f"thermal occupation must be >= 0, got {self.n_bar}")


@dataclass(frozen=True)
class Moments:
    mean_a: complex
    var_a: complex
    cov_adag_a: float

    @property
    def var_adag(self) -> complex:
        return np.conj(self.var_a)

    @property
    def photon_number(self) -> float:
        """Initial <a+ a> = |mean|^2 + Cov(a+, a)."""
        return abs(self.mean_a) ** 2 + self.cov_adag_a


@dataclass(frozen=True)
class CovarianceMatrix:
    v11: float
    v22: float
    v12: float

    @property
    def det(self) -> float:
        return self.v11 * self.v22 - self.v12**2

    @property
    def nu(self) -> float:
        return float(np.sqrt(self.det))


@dataclass(frozen=True)
class CoherencePoint:
    t: float
    nu: float
    mu_bar: float
    entropy: float
    coherence: float


def initial_moments(init: GaussianInit) -> Moments:
    """Second moments of the displaced squeezed thermal state."""
    sh, ch = np.sinh(init.r), np.cosh(init.r)
    return Moments(
        mean_a=complex(init.alpha),
        var_a=complex(-(2.0 * init.n_bar + 1.0) * sh * ch),
        cov_adag_a=float(init.n_bar * ch**2 + (init.n_bar + 1.0) * sh**2),
    )


def propagate_covariance(m0: Moments, u: complex, v: float) -> CovarianceMatrix:
    """Covariance matrix at time t from u(t), v(t) and the initial moments."""
    if abs(u) > 1.0 + NU_CLAMP:
        raise ValueError(f"|u| = {abs(u):.6f} exceeds 1")
    if v < -1e-9:
        raise ValueError(f"v = {v} is negative")
    q = u * u * m0.var_a
    base = 1.0 + 2.0 * v + 2.0 * abs(u) ** 2 * m0.cov_adag_a
    v12c = 1j * (np.conj(q) - q)
    if abs(v12c.imag) > 1e-10:
        raise PhysicalityError(f"V12 imaginary residue {v12c.imag:.3e}")
    cov = CovarianceMatrix(v11=float(base + 2.0 * q.real),
                           v22=float(base - 2.0 * q.real),
                           v12=float(v12c.real))
    if cov.det < 1.0 - NU_CLAMP:
        raise PhysicalityError(f"det V = {cov.det:.8f} < 1: inconsistent u, v")
    return cov


def mean_photon(m0: Moments, photon0: float, u: complex, v: float) -> float:
    """<a+ a>(t) = |u|^2 <a+ a>(0) + v."""
    mu = abs(u) ** 2 * photon0 + v
    if mu < -1e-9:
        raise PhysicalityError(f"mean photon number {mu:.3e} < 0")
    return max(mu, 0.0)


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 1e-15
    out[pos] = x[pos] * np.log2(x[pos])
    return out if out.ndim else float(out)


def entropy(nu) -> float:
    """Von Neumann entropy of a single-mode Gaussian state, in bits."""
    scalar = np.ndim(nu) == 0
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if np.any(nu < 1.0 - NU_CLAMP):
        raise ValueError(f"symplectic eigenvalue below 1: min nu = {nu.min()}")
    nu = np.maximum(nu, 1.0)
    out = _xlog2x((nu + 1.0) / 2.0) - _xlog2x((nu - 1.0) / 2.0)
    return float(out[0]) if scalar else out


def coherence(nu, mu_bar) -> float:
    """Relative entropy of coherence vs the thermal state with matched mu_bar."""
    scalar = np.ndim(nu) == 0 and np.ndim(mu_bar) == 0
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    mu = np.atleast_1d(np.asarray(mu_bar, dtype=float))
    if np.any(~np.isfinite(nu)) or np.any(~np.isfinite(mu)):
        raise ValueError("coherence received non-finite nu or mu_bar")
    if np.any(mu < -1e-9):
        raise ValueError(f"negative mean photon number: {mu.min()}")
    mu = np.maximum(mu, 0.0)
    ref = _xlog2x(mu + 1.0) - _xlog2x(mu)
    out = ref - entropy(nu)
    return float(out[0]) if scalar else out


@dataclass
class CoherenceTrajectory:
    """Per-time covariance data and entropic measures over a Green's trajectory."""

    t: np.ndarray
    v11: np.ndarray
    v22: np.ndarray
    v12: np.ndarray
    nu: np.ndarray
    mu_bar: np.ndarray
    entropy_bits: np.ndarray
    coherence_bits: np.ndarray

    def point(self, i: int) -> CoherencePoint:
        return CoherencePoint(t=float(self.t[i]), nu=float(self.nu[i]),
                              mu_bar=float(self.mu_bar[i]),
                              entropy=float(self.entropy_bits[i]),
                              coherence=float(self.coherence_bits[i]))


def coherence_trajectory(init: GaussianInit, traj: GreensTrajectory) -> CoherenceTrajectory:
    """Evaluate covariance, entropy and coherence at every grid time."""
    m0 = initial_moments(init)
    u = traj.u
    v = np.maximum(traj.v, 0.0)
    q = u * u * m0.var_a
    absu2 = np.abs(u) ** 2
    base = 1.0 + 2.0 * v + 2.0 * absu2 * m0.cov_adag_a
    v11 = base + 2.0 * q.real
    v22 = base - 2.0 * q.real
    v12 = 2.0 * q.imag
    det = v11 * v22 - v12**2
    bad = np.nonzero(det < 1.0 - NU_CLAMP)[0]
    if bad.size:
        raise PhysicalityError(
            f"det V = {det[bad[0]]:.8f} < 1 at t = {traj.grid.times[bad[0]]:.4g}")
    nu = np.sqrt(np.maximum(det, 1.0))
    mu = absu2 * m0.photon_number + v
    return CoherenceTrajectory(
        t=traj.grid.times, v11=v11, v22=v22, v12=v12, nu=nu, mu_bar=mu,
        entropy_bits=entropy(nu), coherence_bits=coherence(nu, mu),
    )
