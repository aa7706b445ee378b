"""Quantum-classical wave-field dynamics of the spin-boson model.

Subpackages:

- ``bath``       Ohmic bath discretization and thermal sampling
- ``adiabatic``  adiabatic-basis quantities at a phase point
- ``dynamics``   wave-pair generators and time propagation
- ``ensemble``   Monte-Carlo trajectory ensembles of <sigma_z>(t)
- ``bracketlab`` non-Hamiltonian bracket algebra laboratory
- ``cli``        command-line interface (simulate / converge / bracket-demo)
"""

__version__ = "0.1.0"

from .bath import (
    PAPER_PARAMS,
    BathSpec,
    PhasePoint,
    SpinBosonParams,
    discretize_bath,
    rho_b_weight,
    sample_phase_point,
    thermal_variances,
)
from .adiabatic import (
    AdiabaticLocal,
    adiabatic_energies,
    adiabatic_local,
    coupling_vector,
    g_of_gamma,
    gamma_of,
    hellmann_feynman_force,
    initial_coefficients,
    sigma_z_matrix,
)
from .dynamics import (
    Generator2,
    PropagationError,
    WavePair,
    build_generator_general,
    build_sigma,
    density_oracle,
    local_sigma_z,
    propagate_trajectory,
    step_euler,
    step_rk4,
)
from .ensemble import ObservableSeries, RunConfig, convergence_report, run_ensemble

__all__ = [
    "PAPER_PARAMS",
    "BathSpec",
    "PhasePoint",
    "SpinBosonParams",
    "discretize_bath",
    "rho_b_weight",
    "sample_phase_point",
    "thermal_variances",
    "AdiabaticLocal",
    "adiabatic_energies",
    "adiabatic_local",
    "coupling_vector",
    "g_of_gamma",
    "gamma_of",
    "hellmann_feynman_force",
    "initial_coefficients",
    "sigma_z_matrix",
    "Generator2",
    "PropagationError",
    "WavePair",
    "build_generator_general",
    "build_sigma",
    "density_oracle",
    "local_sigma_z",
    "propagate_trajectory",
    "step_euler",
    "step_rk4",
    "ObservableSeries",
    "RunConfig",
    "convergence_report",
    "run_ensemble",
    "__version__",
]
