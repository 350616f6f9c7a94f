"""Independent ground-truth engines used by the verification layer.

(a) Discrete-mode evolution: the bilinear system-bath Hamiltonian reduces to a
real-symmetric arrowhead matrix in the single-particle sector; one
eigendecomposition gives the exact propagator at any time, fully independent
of the Volterra solver's quadratures.

(b) Truncated-Fock construction of the displaced squeezed thermal state, for
moments, entropy and coherence cross-checks.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainccinv

from ._quad import _leggauss, power_head_nodes
from .bath import OMEGA0, BathSpec, spectral_density
from .errors import TruncationError
from .gaussian import GaussianInit, Moments

_T_CHUNK = 256


@dataclass(eq=False)
class DiscreteBath:
    """Finite bath: mode frequencies and couplings V_k = sqrt(panel mass of J).

    The layout splits [0, omega_max] into a Gauss-Jacobi head (absorbing the
    w^(s-1) endpoint behavior of J and of J*n products), a log-graded middle
    (resolving the 1/w curvature of the thermal weight), and a uniform tail
    whose spacing keeps the recurrence time beyond twice the horizon. Middle
    and tail modes sit at the J-centroid of their panel and carry its exact
    mass, so sum(V_k^2) reproduces the full spectral weight.
    """

    mode_freqs: np.ndarray
    couplings: np.ndarray
    _lam: np.ndarray = field(default=None, repr=False)
    _evecs: np.ndarray = field(default=None, repr=False)

    @classmethod
    def from_spec(cls, spec: BathSpec, n_modes: int = 2000, t_horizon: float = 50.0,
                  w_head: float = 0.3, n_head: int = None,
                  omega_max: float = None) -> "DiscreteBath":
        if omega_max is None:
            omega_max = spec.omega_c * float(gammainccinv(spec.s + 1.0, 2e-6))
        if n_head is None:
            n_head = max(32, int(round(n_modes / 31.25)))
        dw_cap = min(2.0 * np.pi / (2.1 * t_horizon),
                     np.pi * 2000.0 / (1.2 * t_horizon * n_modes))
        nodes_h, wts_h = power_head_nodes(spec.s, w_head, n_head)
        v2_h = wts_h * spectral_density(spec, nodes_h)
        n_rest = n_modes - n_head
        if (omega_max - w_head) / dw_cap > 0.98 * n_rest:
            dw_cap = (omega_max - w_head) / (0.98 * n_rest)
            if 2.0 * np.pi / dw_cap < 2.05 * t_horizon:
                raise ValueError("n_modes too small for this horizon and cutoff")

        def budget(a):
            w_star = min(max(dw_cap / a, w_head), omega_max)
            return np.log(w_star / w_head) / a + (omega_max - w_star) / dw_cap

        lo, hi = 1e-5, 10.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if budget(mid) > n_rest:
                lo = mid
            else:
                hi = mid
        a = hi
        w_star = min(max(dw_cap / a, w_head), omega_max)
        n_log = max(0, int(np.floor(np.log(w_star / w_head) / a)))
        edges_log = w_head * np.exp(a * np.arange(n_log + 1))
        n_uni = max(1, int(np.ceil((omega_max - edges_log[-1]) / dw_cap)))
        edges_uni = np.linspace(edges_log[-1], omega_max, n_uni + 1)
        edges = np.concatenate([edges_log, edges_uni[1:]])
        xg, wg = _leggauss(8)
        mid_e = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        wn = mid_e[:, None] + half[:, None] * xg[None, :]
        jn = spectral_density(spec, wn) * (half[:, None] * wg[None, :])
        mass = jn.sum(axis=1)
        with np.errstate(invalid="ignore"):
            centroid = np.where(mass > 0.0, (jn * wn).sum(axis=1)
                                / np.where(mass > 0.0, mass, 1.0), mid_e)
        freqs = np.concatenate([nodes_h, centroid])
        v2 = np.concatenate([v2_h, mass])
        return cls(mode_freqs=freqs, couplings=np.sqrt(v2))

    @property
    def count(self) -> int:
        return len(self.mode_freqs)

    def eigensystem(self):
        """Eigenvalues/vectors of the single-particle arrowhead matrix (cached)."""
        if self._lam is None:
            n = self.count
            h = np.zeros((n + 1, n + 1))
            h[0, 0] = OMEGA0
            h[0, 1:] = self.couplings
            h[1:, 0] = self.couplings
            idx = np.arange(1, n + 1)
            h[idx, idx] = self.mode_freqs
            self._lam, self._evecs = np.linalg.eigh(h)
        return self._lam, self._evecs


def exact_u(db: DiscreteBath, t):
    """System survival amplitude: the (0,0) entry of exp(-iHt)."""
    lam, evecs = db.eigensystem()
    w = evecs[0, :] ** 2
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(len(ts), dtype=complex)
    for a in range(0, len(ts), _T_CHUNK):
        b = min(a + _T_CHUNK, len(ts))
        th = np.outer(ts[a:b], lam)
        out[a:b] = np.cos(th) @ w - 1j * (np.sin(th) @ w)
    return out if np.ndim(t) else complex(out[0])


def exact_v(db: DiscreteBath, T_s: float, t):
    """Thermal fluctuation: sum_k n(w_k) |(exp(-iHt))_{0k}|^2."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if T_s == 0.0:
        out = np.zeros(len(ts))
        return out if np.ndim(t) else float(out[0])
    lam, evecs = db.eigensystem()
    u0 = evecs[0, :]
    ut = np.ascontiguousarray(evecs.T)
    nbar = 1.0 / np.expm1(db.mode_freqs / T_s)
    out = np.empty(len(ts))
    for a in range(0, len(ts), _T_CHUNK):
        b = min(a + _T_CHUNK, len(ts))
        th = np.outer(ts[a:b], lam)
        c = np.cos(th) * u0
        s = np.sin(th) * u0
        g_re = c @ ut
        g_im = s @ ut
        out[a:b] = (g_re[:, 1:] ** 2 + g_im[:, 1:] ** 2) @ nbar
    return out if np.ndim(t) else float(out[0])


# ---------------------------------------------------------------------------
# Truncated Fock space
# ---------------------------------------------------------------------------

@dataclass
class FockState:
    cutoff: int
    density: np.ndarray


def _ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), 1)


def fock_state(init: GaussianInit, cutoff: int = 60, leak_tol: float = 1e-8,
               max_cutoff: int = 400) -> FockState:
    """Build D(alpha) S(r) rho_th S+ D+ in a truncated Fock basis.

    Truncated displacement/squeezing generators exponentiate to exactly
    unitary matrices, so the trace never leaks; the usable truncation measure
    is the population stranded in the top Fock levels, where the truncated
    operators are corrupted. The cutoff is raised geometrically until that
    tail mass falls below ``leak_tol``.
    """
    c = cutoff
    while True:
        a = _ladder(c)
        adag = a.conj().T
        disp = expm(init.alpha * adag - np.conj(init.alpha) * a)
        sq = expm(0.5 * init.r * (a @ a - adag @ adag))
        n = np.arange(c + 1)
        p = (init.n_bar / (1.0 + init.n_bar)) ** n / (1.0 + init.n_bar)
        rho = disp @ sq @ np.diag(p) @ sq.conj().T @ disp.conj().T
        top = max(3, c // 10)
        leak = float(np.sum(rho.diagonal().real[-top:])) + abs(1.0 - float(
            np.trace(rho).real))
        if leak <= leak_tol:
            return FockState(cutoff=c, density=rho / np.trace(rho).real)
        if c >= max_cutoff:
            raise TruncationError(
                f"truncation leakage {leak:.2e} at cutoff {c}; raise the cutoff")
        c = min(max_cutoff, int(math.ceil(1.6 * c)))


def fock_moments_entropy_coherence(state: FockState):
    """Moments by trace against ladder operators; entropy from eigenvalues;
    coherence as the relative entropy against the matched thermal reference."""
    rho = state.density
    a = _ladder(state.cutoff)
    n = np.arange(state.cutoff + 1)
    mean = complex(np.trace(rho @ a))
    var = complex(np.trace(rho @ a @ a)) - mean**2
    mu = float(np.sum(rho.diagonal().real * n))
    cov = mu - abs(mean) ** 2
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > 1e-300]
    ent = float(-np.sum(evals * np.log2(evals)))
    ref = (mu + 1.0) * np.log2(mu + 1.0) - (mu * np.log2(mu) if mu > 1e-15 else 0.0)
    return (Moments(mean_a=mean, var_a=var, cov_adag_a=cov), ent, float(ref - ent))
