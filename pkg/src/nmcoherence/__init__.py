"""Exact non-Markovian coherence dynamics of a displaced squeezed thermal mode
coupled to an Ohmic-family bosonic bath."""

from ._accel import NUMBA_ENABLED, backend
from .bath import (BathSpec, OMEGA0, bose_occupation, critical_coupling,
                   memory_kernel, spectral_density, thermal_kernel)
from .gaussian import (CoherencePoint, CoherenceTrajectory, CovarianceMatrix,
                       GaussianInit, Moments, coherence, coherence_trajectory,
                       entropy, initial_moments, mean_photon,
                       propagate_covariance)
from .greens import (GreensTrajectory, TimeGrid, solve_greens, solve_u, solve_v)
from .oracle import (DiscreteBath, FockState, exact_u, exact_v, fock_state,
                     fock_moments_entropy_coherence)
from .steady import (SteadyReport, damping_gamma, find_localized_mode,
                     self_energy, self_energy_delta, steady_coherence_surface,
                     steady_report, steady_u_envelope, steady_v)

__version__ = "0.1.0"

__all__ = [
    "BathSpec", "OMEGA0", "bose_occupation", "critical_coupling",
    "memory_kernel", "spectral_density", "thermal_kernel",
    "GaussianInit", "Moments", "CovarianceMatrix", "CoherencePoint",
    "CoherenceTrajectory", "initial_moments", "propagate_covariance",
    "mean_photon", "entropy", "coherence", "coherence_trajectory",
    "TimeGrid", "GreensTrajectory", "solve_u", "solve_v", "solve_greens",
    "DiscreteBath", "FockState", "exact_u", "exact_v", "fock_state",
    "fock_moments_entropy_coherence",
    "SteadyReport", "self_energy_delta", "self_energy", "damping_gamma",
    "find_localized_mode", "steady_u_envelope", "steady_v", "steady_report",
    "steady_coherence_surface",
    "NUMBA_ENABLED", "backend",
]
