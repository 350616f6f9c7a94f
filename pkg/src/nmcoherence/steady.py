"""Long-time limit: self-energy, localized mode, asymptotic Green's functions,
and steady-state coherence surfaces.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ._quad import geometric_edges, panel_nodes, power_head_nodes
from .bath import OMEGA0, BathSpec, bose_occupation, spectral_density
from .errors import NumericalError
from .gaussian import Moments, coherence, initial_moments, mean_photon

_W_HEAD = 0.3


@dataclass(frozen=True)
class SteadyReport:
    """Localized-mode data and the steady thermal occupation."""

    exists_localized: bool
    omega_b: Optional[float]
    Z: Optional[float]
    v_inf: float = 0.0


def damping_gamma(spec: BathSpec, omega):
    """gamma(omega) = pi * J(omega) for omega >= 0."""
    return np.pi * spectral_density(spec, omega)


def _head_rule(spec: BathSpec, w_head: float, order: int):
    """Nodes and J-weighted quadrature weights for the endpoint region of J."""
    nodes, wts = power_head_nodes(spec.s, w_head, order)
    return nodes, wts * spectral_density(spec, nodes)


def self_energy_delta(spec: BathSpec, omega, refine: int = 1):
    """Delta(omega) = PV integral of J(w')/(omega - w') over w' in [0, inf)."""
    w_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.array([_delta_scalar(spec, float(w), refine) for w in w_arr])
    return out if np.ndim(omega) else float(out[0])


def _delta_scalar(spec: BathSpec, w: float, refine: int = 1) -> float:
    oc = spec.omega_c
    order_h = 48 * refine
    if w <= 0.0:
        # integrand regular on (0, inf); endpoint kink absorbed by the head rule
        nodes, jw = _head_rule(spec, _W_HEAD, order_h)
        head = float(np.sum(jw / (w - nodes)))
        edges = geometric_edges(_W_HEAD, _W_HEAD + 40.0 * oc, 1.35, 0.1 / refine)
        nt, wt = panel_nodes(edges, 16)
        return head + float(np.sum(wt * spectral_density(spec, nt) / (w - nt)))
    # w > 0: principal value via subtract-the-singularity on the middle range
    w_head = min(_W_HEAD, 0.5 * w)
    nodes, jw = _head_rule(spec, w_head, order_h)
    head = float(np.sum(jw / (w - nodes)))
    x_cut = max(4.0 * w, 12.0 * oc)
    jww = float(spectral_density(spec, w))
    first = min(1e-3 * max(1.0, w), 0.125 * (w - w_head)) / refine
    left = w - geometric_edges(0.0, w - w_head, 1.5, first)[::-1]
    right = w + geometric_edges(0.0, x_cut - w, 1.5, first)
    nm, wm = panel_nodes(np.concatenate([left, right[1:]]), 16)
    sub = float(np.sum(wm * (spectral_density(spec, nm) - jww) / (w - nm)))
    log_term = jww * np.log((w - w_head) / (x_cut - w))
    edges_t = geometric_edges(x_cut, x_cut + 40.0 * oc, 1.5, 0.5 * oc / refine)
    nt, wt = panel_nodes(edges_t, 16)
    tail = float(np.sum(wt * spectral_density(spec, nt) / (w - nt)))
    return head + sub + log_term + tail


def self_energy(spec: BathSpec, omega: float, side: int = +1) -> complex:
    """Sigma(omega +- i0) = Delta(omega) -+ i*gamma(omega) on the real axis."""
    delta = self_energy_delta(spec, omega)
    gamma = damping_gamma(spec, omega) if omega >= 0 else 0.0
    return complex(delta, -side * gamma)


def find_localized_mode(spec: BathSpec):
    """Root of w - omega_0 - Delta(w) below the continuum, with its residue.

    Returns (omega_b, Z) or None. The root function is monotone increasing on
    w < 0, so existence reduces to its sign at 0-.
    """
    def f(w):
        return w - OMEGA0 - _delta_scalar(spec, w)

    hi = -1e-12
    if f(hi) <= 0.0:
        return None
    lo = -20.0 * spec.omega_c
    if f(lo) >= 0.0:
        raise NumericalError("localized-mode bracket failed; widen the search")
    omega_b = brentq(f, lo, hi, xtol=1e-13, rtol=8.9e-16)
    h = 1e-6 * max(1.0, abs(omega_b))
    d1 = (_delta_scalar(spec, omega_b + h) - _delta_scalar(spec, omega_b - h)) / (2 * h)
    d2 = (_delta_scalar(spec, omega_b + 0.5 * h)
          - _delta_scalar(spec, omega_b - 0.5 * h)) / h
    if abs(d1 - d2) > 5e-4 * max(1.0, abs(d1)):
        raise NumericalError(f"unstable Delta'(omega_b): {d1} vs {d2}")
    z = 1.0 / (1.0 - d1)
    if not 0.0 < z <= 1.0 + 1e-9:
        raise NumericalError(f"residue Z = {z} outside (0, 1]")
    return float(omega_b), float(min(z, 1.0))


def steady_u_envelope(report: SteadyReport, t):
    """Long-time amplitude Z * exp(-i omega_b t); requires a localized mode."""
    if not report.exists_localized:
        raise ValueError("no localized mode: the long-time amplitude vanishes")
    return report.Z * np.exp(-1j * report.omega_b * np.asarray(t, dtype=float))


def _continuum_resonances(spec: BathSpec, w_max: float):
    """Roots of w - omega_0 - Delta(w) on the positive axis (quadrature breakpoints)."""
    ws = np.linspace(_W_HEAD, min(w_max, 4.0), 120)
    fs = np.array([w - OMEGA0 - _delta_scalar(spec, w) for w in ws])
    roots = []
    for i in range(len(ws) - 1):
        if fs[i] == 0.0 or fs[i] * fs[i + 1] < 0:
            roots.append(brentq(lambda w: w - OMEGA0 - _delta_scalar(spec, w),
                                ws[i], ws[i + 1], xtol=1e-10))
    return roots


def _steady_v_once(spec: BathSpec, report: SteadyReport, refine: int) -> float:
    oc = spec.omega_c
    wscan = np.linspace(_W_HEAD, 60.0 * oc, 4000)
    env = spectral_density(spec, wscan) * bose_occupation(spec, wscan)
    keep = np.nonzero(env > 1e-12 * env.max())[0]
    w_max = max(float(wscan[keep[-1]]) if keep.size else 2.0 * oc, 3.0)

    nodes_h, jw_h = _head_rule(spec, _W_HEAD, 64 * refine)
    edges = [np.asarray([_W_HEAD])]
    for w_r in _continuum_resonances(spec, w_max):
        gam = max(float(damping_gamma(spec, w_r)), 1e-6)
        last = float(edges[-1][-1])
        if w_r - last < gam / 3.0 or w_r >= w_max - gam:
            continue
        left = w_r - geometric_edges(0.0, w_r - last, 1.6, gam / 6.0)[::-1]
        edges.append(left[1:])
        span = min(0.5, w_max - w_r - 1e-9)
        edges.append(w_r + geometric_edges(0.0, span, 1.6, gam / 6.0)[1:])
    base = geometric_edges(float(edges[-1][-1]), w_max, 1.25, 0.2 / refine)
    edges.append(base[1:])
    nodes_t, wq_t = panel_nodes(np.concatenate(edges), 16 * refine)
    jw_t = wq_t * spectral_density(spec, nodes_t)

    nodes = np.concatenate([nodes_h, nodes_t])
    jw = np.concatenate([jw_h, jw_t])
    delta = self_energy_delta(spec, nodes, refine=refine)
    gamma = damping_gamma(spec, nodes)
    dens = 1.0 / ((nodes - OMEGA0 - delta) ** 2 + gamma**2)
    if report.exists_localized:
        dens = dens + report.Z**2 / (nodes - report.omega_b) ** 2
    return float(np.sum(jw * bose_occupation(spec, nodes) * dens))


def steady_v(spec: BathSpec, report: Optional[SteadyReport] = None) -> float:
    """Steady thermal occupation: integral of [D_l + D_c] * n over the continuum."""
    if spec.temperature == 0.0:
        return 0.0
    if report is None:
        mode = find_localized_mode(spec)
        report = SteadyReport(exists_localized=mode is not None,
                              omega_b=None if mode is None else mode[0],
                              Z=None if mode is None else mode[1])
    prev = _steady_v_once(spec, report, refine=1)
    for refine in (2, 4):
        cur = _steady_v_once(spec, report, refine=refine)
        if abs(cur - prev) <= 1e-8 * max(1.0, abs(cur)):
            return cur
        prev = cur
    if abs(cur - prev) > 1e-5 * max(1.0, abs(cur)):
        raise NumericalError("steady_v quadrature did not stabilize")
    return cur


def steady_report(spec: BathSpec) -> SteadyReport:
    """Find the localized mode (if any) and the steady occupation."""
    mode = find_localized_mode(spec)
    rep = SteadyReport(exists_localized=mode is not None,
                       omega_b=None if mode is None else mode[0],
                       Z=None if mode is None else mode[1])
    if spec.temperature == 0.0:
        return rep
    return SteadyReport(exists_localized=rep.exists_localized, omega_b=rep.omega_b,
                        Z=rep.Z, v_inf=steady_v(spec, rep))


def steady_coherence_surface(spec: BathSpec, alphas, rs, n_bar: float,
                             report: Optional[SteadyReport] = None) -> np.ndarray:
    """Steady coherence C over an (alpha, r) grid; C[i, j] = C(alphas[i], rs[j]).

    Without a localized mode the long-time state is thermal and the surface is
    identically zero; the amplitude phase drops out of C, so only |u| = Z and
    v_inf enter.
    """
    if report is None:
        report = steady_report(spec)
    z = report.Z if report.exists_localized else 0.0
    out = np.empty((len(alphas), len(rs)))
    for i, a in enumerate(alphas):
        for j, r in enumerate(rs):
            m0 = initial_moments(_init_for(a, r, n_bar))
            out[i, j] = _steady_point(m0, z, report.v_inf)
    return out


def _init_for(alpha, r, n_bar):
    from .gaussian import GaussianInit
    return GaussianInit(alpha=alpha, r=r, n_bar=n_bar)


def _steady_point(m0: Moments, z: float, v_inf: float) -> float:
    q = z**2 * m0.var_a
    base = 1.0 + 2.0 * v_inf + 2.0 * z**2 * m0.cov_adag_a
    det = (base + 2.0 * q.real) * (base - 2.0 * q.real) - (2.0 * q.imag) ** 2
    nu = float(np.sqrt(max(det, 1.0)))
    mu = mean_photon(m0, m0.photon_number, z, v_inf)
    return float(coherence(nu, mu))
