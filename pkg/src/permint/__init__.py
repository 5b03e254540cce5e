"""permint: permanents, photon-counting amplitudes, and the Gaussian
integrals that reproduce them, each path cross-checking the others."""

__version__ = "0.1.0"

from .linops import (
    check_unitarity,
    haar_random_unitary,
    load_matrix,
    permutation_unitary,
    save_matrix,
    submatrix_for_output,
    unitarity_defect,
)
from .permanent import (
    PermanentResult,
    compute_permanent,
    permanent_macmahon,
    permanent_naive,
    permanent_ryser,
)
from .fock import (
    OutputDistribution,
    amplitude,
    configuration_count,
    distribution_to_csv,
    enumerate_configurations,
    fock_oracle_amplitude,
    output_distribution,
)
from .phasespace import (
    characteristic_function,
    displaced_amplitudes,
    number_kernel,
    single_photon_overlap,
    total_energy,
    vacuum_overlap,
    wigner_closed_form,
)
from .mcint import (
    CrossFormReport,
    IntegralForm,
    MCEstimate,
    analytic_permutation_probability,
    cross_form_report,
    mc_probability,
    sample_gaussian_phase_space,
    verify_identity,
)
from .macmahon import (
    SparsePolynomial,
    build_linear_forms,
    expand_multilinear,
    permanent_via_macmahon,
)

__all__ = [
    "__version__",
    "check_unitarity",
    "haar_random_unitary",
    "load_matrix",
    "permutation_unitary",
    "save_matrix",
    "submatrix_for_output",
    "unitarity_defect",
    "PermanentResult",
    "compute_permanent",
    "permanent_macmahon",
    "permanent_naive",
    "permanent_ryser",
    "OutputDistribution",
    "amplitude",
    "configuration_count",
    "distribution_to_csv",
    "enumerate_configurations",
    "fock_oracle_amplitude",
    "output_distribution",
    "characteristic_function",
    "displaced_amplitudes",
    "number_kernel",
    "single_photon_overlap",
    "total_energy",
    "vacuum_overlap",
    "wigner_closed_form",
    "CrossFormReport",
    "IntegralForm",
    "MCEstimate",
    "analytic_permutation_probability",
    "cross_form_report",
    "mc_probability",
    "sample_gaussian_phase_space",
    "verify_identity",
    "SparsePolynomial",
    "build_linear_forms",
    "expand_multilinear",
    "permanent_via_macmahon",
]
