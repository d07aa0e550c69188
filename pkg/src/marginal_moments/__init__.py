"""Second-order marginal moments of multi-qubit states.

Bloch tensors, exact and simulated randomized-measurement moments,
local-unitary certificates, and a family of separable and entangled
two-qubit states that share every second-order marginal moment.
"""
from .bloch import (
    BlochTensor,
    MarginalVector,
    bloch_from_state,
    correlation_matrix,
    marginal_vector,
    state_from_bloch,
)
from .counterexamples import (
    CeParams,
    base_state,
    build_ce,
    ce_positive,
    em1_states,
    em5_states,
    scan_ce,
)
from .entanglement import (
    concurrence,
    entanglement_of_formation,
    entanglement_report,
    is_ppt,
    negativity,
)
from .luequiv import (
    LuVerdict,
    Verdict,
    check_blockwise_rotation,
    lu_verdict,
    mirsky_bound,
    product_rotation_residual,
    rotation_between,
    single_qubit_lu_equivalent,
    su2_to_so3,
)
from .moments import MomentSet, moment, moment_set, moment_sets_equal, purity_from_moments
from .operators import OperatorBasis, gellmann_basis, tensor_basis_element
from .sampling import (
    EstimatorConfig,
    MomentEstimate,
    design_settings,
    estimate_moment,
    haar_direction,
    haar_su2,
    moment_from_design,
)
from .states import (
    DensityMatrix,
    StateError,
    bell_state,
    from_ket,
    is_positive,
    maximally_mixed,
    partial_trace,
    purity,
    random_density,
    random_pure,
    spectrum,
    tensor_states,
)

__version__ = "0.1.0"
