"""Ohmic-family bosonic bath: spectral density, occupation, memory kernels.

All frequencies are in units of the system frequency (omega_0 = 1), time in
its inverse, and temperature is the scaled temperature T_s.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_genlaguerre

OMEGA0 = 1.0


@dataclass(frozen=True)
class BathSpec:
    """Bath parameters: coupling eta, Ohmicity exponent s, cutoff, temperature."""

    eta: float
    s: float
    omega_c: float
    temperature: float = 0.0

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"Ohmicity exponent must be positive, got s={self.s}")
        if not self.omega_c > 0:
            raise ValueError(f"cutoff must be positive, got omega_c={self.omega_c}")
        if self.eta < 0:
            raise ValueError(f"coupling must be nonnegative, got eta={self.eta}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")

    @classmethod
    def from_relative(cls, eta_rel: float, s: float, omega_c: float,
                      temperature: float = 0.0) -> "BathSpec":
        """Build a spec with the coupling given in units of the critical one."""
        eta_c = OMEGA0 / (omega_c * math.gamma(s))
        return cls(eta=eta_rel * eta_c, s=s, omega_c=omega_c, temperature=temperature)


def critical_coupling(spec: BathSpec) -> float:
    """Coupling strength at which a localized mode splits off the continuum."""
    return OMEGA0 / (spec.omega_c * math.gamma(spec.s))


def spectral_density(spec: BathSpec, omega):
    """J(omega) = eta * omega * (omega/omega_c)^(s-1) * exp(-omega/omega_c)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral_density requires omega >= 0")
    x = w / spec.omega_c
    out = spec.eta * spec.omega_c * x**spec.s * np.exp(-x)
    return out if out.ndim else float(out)


def bose_occupation(spec: BathSpec, omega):
    """Thermal occupation 1/(exp(omega/T_s) - 1); zero at T_s = 0.

    omega must be strictly positive: the omega -> 0 divergence is integrable
    only inside J(omega)*n(omega) products, which callers handle themselves.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("bose_occupation requires omega > 0")
    if spec.temperature == 0.0:
        out = np.zeros_like(w)
    else:
        with np.errstate(over="ignore"):  # exp overflow -> occupation 0
            out = 1.0 / np.expm1(w / spec.temperature)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Memory kernels
# ---------------------------------------------------------------------------
# The Fourier-Laplace transform of the Ohmic-family J has a closed form,
#   g(dt) = eta * omega_c^2 * Gamma(s+1) * (1 + i*omega_c*dt)^(-(s+1)),
# which the solvers use directly. The fixed-order Gauss-Laguerre and adaptive
# evaluators below are retained as independent cross-checks; the Laguerre rule
# loses the oscillation once |omega_c*dt| grows past ~sqrt(order).

def memory_kernel(spec: BathSpec, dt):
    """Bath correlation g(dt) = integral of J(w) e^{-i w dt} dw."""
    t = np.asarray(dt, dtype=float)
    g0 = spec.eta * spec.omega_c**2 * math.gamma(spec.s + 1.0)
    out = g0 * (1.0 + 1j * spec.omega_c * t) ** (-(spec.s + 1.0))
    return out if out.ndim else complex(out)


def thermal_kernel(spec: BathSpec, dt):
    """Thermal correlation gtilde(dt) = integral of J(w) n(w) e^{-i w dt} dw.

    Expanding n(w) in exp(-m w / T_s) turns each term into the same
    Gamma-integral as the memory kernel; the sum is a Hurwitz zeta value with
    complex offset, evaluated by vectorized Euler-Maclaurin.
    """
    t = np.asarray(dt, dtype=float)
    if spec.temperature == 0.0:
        out = np.zeros(t.shape, dtype=complex)
        return out if out.ndim else complex(out)
    ts = spec.temperature
    sigma = spec.s + 1.0
    a = 1.0 + ts / spec.omega_c + 1j * ts * t
    pref = spec.eta * spec.omega_c ** (1.0 - spec.s) * math.gamma(sigma) * ts**sigma
    out = pref * hurwitz_zeta(sigma, a)
    return out if t.ndim else complex(out[0])


# Euler-Maclaurin coefficients B_{2j} / (2j)!
_EM_COEFF = (1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
             1.0 / 47900160.0, -691.0 / 1307674368000.0,
             1.0 / 74724249600.0, -3617.0 / 10670622842880000.0)


def hurwitz_zeta(sigma: float, a):
    """Hurwitz zeta for real sigma > 1 and complex a with Re(a) > 0."""
    if sigma <= 1.0:
        raise ValueError("hurwitz_zeta requires sigma > 1")
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    if np.any(a.real <= 0):
        raise ValueError("hurwitz_zeta requires Re(a) > 0")
    # shift until |a + M| >= 12 so the asymptotic correction converges fast
    need = np.sqrt(np.maximum(144.0 - a.imag**2, 0.0))
    m_shift = int(np.ceil(np.maximum(need - a.real, 0.0).max()))
    z = np.zeros_like(a)
    for m in range(m_shift):
        z += (a + m) ** (-sigma)
    b = a + m_shift
    z += b ** (1.0 - sigma) / (sigma - 1.0) + 0.5 * b ** (-sigma)
    pref = b ** (-sigma - 1.0)
    b2 = b * b
    poch = sigma
    for j, c in enumerate(_EM_COEFF, start=1):
        z += c * poch * pref
        poch *= (sigma + 2 * j - 1) * (sigma + 2 * j)
        pref = pref / b2
    return z


# ---------------------------------------------------------------------------
# Quadrature cross-checks
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _genlaguerre_rule(order: int, alpha: float):
    return roots_genlaguerre(order, alpha)


def memory_kernel_quadrature(spec: BathSpec, dt: float, order: int = 200) -> complex:
    """Fixed-order generalized Gauss-Laguerre evaluation of g(dt).

    Reliable while the phase omega_c*|dt| stays resolvable at this order
    (roughly |omega_c*dt| < sqrt(order)); use the adaptive variant beyond.
    """
    x, w = _genlaguerre_rule(order, spec.s)
    theta = spec.omega_c * dt
    g0 = spec.eta * spec.omega_c**2
    return g0 * complex(np.sum(w * np.exp(-1j * theta * x)))


def thermal_kernel_quadrature(spec: BathSpec, dt: float, order: int = 200) -> complex:
    """Gauss-Laguerre evaluation of gtilde(dt) with the w->0 limit folded in.

    Uses weight x^(s-1); the remaining factor x*n(omega_c x) is smooth at 0.
    """
    if spec.temperature == 0.0:
        return 0.0 + 0.0j
    x, w = _genlaguerre_rule(order, spec.s - 1.0)
    theta = spec.omega_c * dt
    with np.errstate(over="ignore"):
        phi = x / np.expm1(spec.omega_c * x / spec.temperature)
    return spec.eta * spec.omega_c**2 * complex(np.sum(w * phi * np.exp(-1j * theta * x)))


def memory_kernel_adaptive(spec: BathSpec, dt: float) -> complex:
    """Adaptive (QAWF) evaluation of g(dt); slow but robust at any lag."""
    if dt < 0:
        return np.conj(memory_kernel_adaptive(spec, -dt))
    f = lambda w: spectral_density(spec, w)
    if dt == 0.0:
        re, _ = quad(f, 0.0, np.inf, limit=200)
        return complex(re)
    re, _ = quad(f, 0.0, np.inf, weight="cos", wvar=dt, limlst=200)
    im, _ = quad(f, 0.0, np.inf, weight="sin", wvar=dt, limlst=200)
    return re - 1j * im


def thermal_kernel_adaptive(spec: BathSpec, dt: float) -> complex:
    """Adaptive evaluation of gtilde(dt); head mapped as w = y^2 for s < 1."""
    if spec.temperature == 0.0:
        return 0.0 + 0.0j
    if dt < 0:
        return np.conj(thermal_kernel_adaptive(spec, -dt))

    def jn(w):
        with np.errstate(over="ignore"):  # exp overflow -> integrand 0
            return spectral_density(spec, w) / np.expm1(w / spec.temperature)

    head_re, _ = quad(lambda y: 2.0 * y * jn(y * y) * np.cos(y * y * dt),
                      0.0, 1.0, limit=200)
    head_im, _ = quad(lambda y: 2.0 * y * jn(y * y) * np.sin(y * y * dt),
                      0.0, 1.0, limit=200)
    if dt == 0.0:
        tail_re, _ = quad(jn, 1.0, np.inf, limit=200)
        tail_im = 0.0
    else:
        tail_re, _ = quad(jn, 1.0, np.inf, weight="cos", wvar=dt, limlst=200)
        tail_im, _ = quad(jn, 1.0, np.inf, weight="sin", wvar=dt, limlst=200)
    return (head_re + tail_re) - 1j * (head_im + tail_im)
