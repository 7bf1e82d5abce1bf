"""Anisotropic invariants of pure three-qubit states.

Exact spin-spectrum invariants, Bell nonlocality and monogamy, and a
Poissonian simulation of the photon-counting measurement with bootstrap
error bars and tomographic reconstruction.
"""
__version__ = "0.1.0"

from .linalg import BACKEND, hermitian_eigensystem, real_symmetric3_eigenvalues, tensor_product  # noqa: E402
from .states import (  # noqa: E402
    Pair,
    Party,
    PureState3,
    apply_local_unitaries,
    bloch_vector,
    correlation_matrix,
    ghz_class_state,
    haar_random_state,
    random_local_unitary,
    reduce_pair,
    w_class_state,
)
from .invariants import (  # noqa: E402
    concurrence,
    invariance_report,
    ordering_quadruple,
    spin_spectrum,
    three_tangle,
)
from .nonlocality import (  # noqa: E402
    MeasurementDirections,
    chsh_expectation,
    horodecki_parameter,
    monogamy_report,
    optimal_chsh_settings,
)
from .experiment import (  # noqa: E402
    bootstrap_errors,
    estimate_correlations,
    fidelity,
    outcome_distribution,
    simulate_counts,
    tomography_reconstruct,
)
