"""
ncplane - Mécanique quantique sur le plan non commutatif.

Particule chargée dans un champ magnétique uniforme avec [q̂¹, q̂²] = iθ :
orbites classiques dans les jauges de Landau et symétrique, algèbre de Fock
tronquée, états cohérents de Malkin-Man'ko et λ-états cohérents, et
quantification de Berezin-Toeplitz par ces états.

Exemple d'utilisation:
    from ncplane import derive, error_function, quantize_lambda
    from ncplane.schemas import ClassicalObservable

    d = derive({"B": 1.0, "theta": 0.5})
    print(d.omega_tilde)

    e = error_function(2.0, 1.0)
    Z = quantize_lambda(ClassicalObservable.monomial(1, 0), 2.0, 10)
"""

from .__version__ import __version__  # noqa: F401
from .classical import closed_form, energy_radius, integrate_eom
from .cstates import (
    classical_l_from_zeta,
    error_function,
    gen_exponential,
    gen_factorial,
    internal_radius,
    j_expectation,
    lambda_cs_vector,
    mm_dispersions,
    mm_mean_trajectory,
    zeta_evolution,
)
from .exceptions import (
    CriticalRegime,
    DomainError,
    MissingInput,
    NCPlaneError,
    NegativeArgument,
    NonPositiveConstant,
    NumericalError,
    QuadratureNonConvergence,
    StepFailure,
    TruncationWarning,
    ValidationError,
)
from .fock import (
    angular_momentum,
    center_and_relative,
    hamiltonian_landau,
    hamiltonian_symmetric,
    ladder,
    reconstruct_noncommuting_positions,
    z_lambda,
)
from .logging_config import configure_logging
from .params import derive
from .quantize import (
    quantize_lambda,
    quantize_phase_space_map,
    quantize_standard,
    verify_identities,
    verify_moments,
    weight_eval,
)
from .schemas import (
    ClassicalObservable,
    DerivedParams,
    ExperimentConfig,
    Gauge,
    OrbitSpec,
    PhysicalParams,
    TruncatedOperator,
)

__all__ = [
    # Paramètres
    "derive",
    "PhysicalParams",
    "DerivedParams",
    # Dynamique classique
    "Gauge",
    "OrbitSpec",
    "closed_form",
    "integrate_eom",
    "energy_radius",
    # Fock
    "TruncatedOperator",
    "ladder",
    "hamiltonian_symmetric",
    "hamiltonian_landau",
    "angular_momentum",
    "z_lambda",
    "center_and_relative",
    "reconstruct_noncommuting_positions",
    # États cohérents
    "gen_factorial",
    "gen_exponential",
    "j_expectation",
    "classical_l_from_zeta",
    "error_function",
    "zeta_evolution",
    "internal_radius",
    "lambda_cs_vector",
    "mm_mean_trajectory",
    "mm_dispersions",
    # Quantification
    "ClassicalObservable",
    "weight_eval",
    "quantize_lambda",
    "quantize_standard",
    "quantize_phase_space_map",
    "verify_identities",
    "verify_moments",
    # Configuration
    "ExperimentConfig",
    # Exceptions
    "NCPlaneError",
    "ValidationError",
    "NonPositiveConstant",
    "DomainError",
    "MissingInput",
    "CriticalRegime",
    "NegativeArgument",
    "NumericalError",
    "StepFailure",
    "QuadratureNonConvergence",
    "TruncationWarning",
    # Logging
    "configure_logging",
]
