"""Phase-space propagation of Wigner functions under quadratic Hamiltonians,
with the inverted oscillator as the flagship case: spectral split-operator
time stepping, the four Hilbert-phase-space representations (W, B, Z, A),
closed-form classical trajectories in the direct and reciprocal planes, and
conservation diagnostics.
"""
from .analysis import (DiagnosticsRecord, covariance_and_uncertainty, diagnostics,
                       hudson_check, mean_energy, purity, quadrant_decomposition,
                       transmission_reflection)
from .classical import (ConservationReport, TrajectoryPoint, characteristics_oracle,
                        generator_conservation_check, hamiltonian_direct,
                        hamiltonian_reciprocal, newton_trajectory,
                        reciprocal_trajectory)
from .errors import (ConfigurationError, DomainError, InstabilityError,
                     NormalizationError, StateConstructionError, WignerflowError)
from .grid import (GaussianProfile, PhaseGrid, PhaseState, QuadraticHamiltonian,
                   Representation, gaussian_wigner, make_grid)
from .propagator import PropagationPlan, propagate, step
from .representations import (blokhintsev_from_wavefunction, degenerate_partner,
                              l2_norm, to_representation)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "ConservationReport", "DiagnosticsRecord", "DomainError",
    "GaussianProfile", "InstabilityError", "NormalizationError", "PhaseGrid",
    "PhaseState", "PropagationPlan", "QuadraticHamiltonian", "Representation",
    "StateConstructionError", "TrajectoryPoint", "WignerflowError",
    "blokhintsev_from_wavefunction", "characteristics_oracle",
    "covariance_and_uncertainty", "degenerate_partner", "diagnostics",
    "gaussian_wigner", "generator_conservation_check", "hamiltonian_direct",
    "hamiltonian_reciprocal", "hudson_check", "l2_norm", "make_grid",
    "mean_energy", "newton_trajectory", "propagate", "purity",
    "quadrant_decomposition", "reciprocal_trajectory", "step",
    "to_representation", "transmission_reflection",
]
