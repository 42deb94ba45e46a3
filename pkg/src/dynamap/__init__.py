"""Dynamical-map families and Markovianity diagnostics for open quantum systems.

Construct closed-form map families (Pauli mixtures, projector families,
semigroup decompositions), extract time-local generators and canonical
rates, scan CP-divisibility / trace-distance / capacity witnesses, and
cross-validate against RK4 and memory-kernel Volterra solvers.
"""

from ._kernels import BACKEND
from .channels import (
    CpCheck,
    apply,
    choi,
    is_cp,
    is_projector,
    is_tp,
    maximally_mixed,
    projector_dephase,
    projector_depolarize,
    projector_replacer,
    random_density_matrix,
    transpose_superop,
    validate_state,
)
from .diagnostics import (
    BlpReport,
    CapacitySeries,
    DivisibilityReport,
    LaplaceResult,
    SemiMarkovReport,
    blp_derivative,
    blp_scan,
    capacity_trajectory,
    cp_divisibility_scan,
    default_qubit_pairs,
    depolarizing_capacity,
    kernel_laplace_from_f,
    laplace,
    semimarkov_check,
)
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    DynamapError,
    GridError,
    InvalidStateError,
    NotHermitianError,
    NotProjectorError,
    NumericalError,
    ProfileError,
    SingularMatrixError,
    StepSizeError,
    UnsupportedChannelError,
)
from .families import (
    DynamicalMapFamily,
    MemoryKernel,
    SampledFamily,
    analytic_memory_solution,
    convex_combine,
    pauli_mixture,
    pauli_semigroup,
    projector_family,
    projector_semigroup,
    projector_weight,
    propagate_ode,
    solve_memory_kernel,
)
from .generators import (
    GkslGenerator,
    PauliRates,
    extract_generator,
    gksl_superop,
    pauli_gksl,
    pauli_rates,
    pauli_transfer,
)
from .linalg import (
    PAULIS,
    HermEig,
    herm_eig,
    inv,
    kron,
    trace_norm,
    unvec,
    vec,
)
from .mixtures import (
    GProfile,
    MixtureDecomposition,
    ProfileReport,
    decompose,
    decomposition_families,
    g_profile,
    g_sin2,
    local_rates,
    mu_profiles,
    t_star,
    validate_profile,
    waiting_densities,
)
from .quad import adaptive_simpson

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # channels
    "CpCheck", "apply", "choi", "is_cp", "is_projector", "is_tp",
    "maximally_mixed", "projector_dephase", "projector_depolarize",
    "projector_replacer", "random_density_matrix", "transpose_superop",
    "validate_state",
    # diagnostics
    "BlpReport", "CapacitySeries", "DivisibilityReport", "LaplaceResult",
    "SemiMarkovReport", "blp_derivative", "blp_scan", "capacity_trajectory",
    "cp_divisibility_scan", "default_qubit_pairs", "depolarizing_capacity",
    "kernel_laplace_from_f", "laplace", "semimarkov_check",
    # errors
    "ConvergenceError", "DimensionMismatchError", "DomainError",
    "DynamapError", "GridError", "InvalidStateError", "NotHermitianError",
    "NotProjectorError", "NumericalError", "ProfileError",
    "SingularMatrixError", "StepSizeError", "UnsupportedChannelError",
    # families
    "DynamicalMapFamily", "MemoryKernel", "SampledFamily",
    "analytic_memory_solution", "convex_combine", "pauli_mixture",
    "pauli_semigroup", "projector_family", "projector_semigroup",
    "projector_weight", "propagate_ode", "solve_memory_kernel",
    # generators
    "GkslGenerator", "PauliRates", "extract_generator", "gksl_superop",
    "pauli_gksl", "pauli_rates", "pauli_transfer",
    # linalg
    "PAULIS", "HermEig", "herm_eig", "inv", "kron", "trace_norm", "unvec",
    "vec",
    # mixtures
    "GProfile", "MixtureDecomposition", "ProfileReport", "decompose",
    "decomposition_families", "g_profile", "g_sin2", "local_rates",
    "mu_profiles", "t_star", "validate_profile", "waiting_densities",
    # quadrature
    "adaptive_simpson",
]
