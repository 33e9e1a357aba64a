"""entroof: bipartite entanglement measures built on Schmidt-vector arithmetic.

Core objects: pure and mixed state containers with validated invariants,
majorization-based LOCC convertibility, a registry of pure-state measures,
ensemble optimizers for the pre-image extension value and the convex roof,
the exact two-qubit concurrence, one-shot entanglement cost, and the
SEPP/monogamy demonstrations.
"""

from .applications import (
    MonogamyVerdict,
    SeppReport,
    concurrence_bipartition,
    demo_states,
    min_schmidt_rank_in_span,
    monogamy_check,
    robustness_upper_mixed,
    sepp_feasible,
)
from .cost import (
    CostResult,
    eof_continuity_bound,
    max_entangled,
    one_shot_cost_pure,
    smoothed_cost_pure_upper,
)
from .ensemble import DecompositionParam, Ensemble, decompose, identity_param, random_isometry
from .majorization import (
    SchmidtVector,
    average_schmidt,
    ensemble_convertible,
    majorizes,
    nielsen_convertible,
    pure_from_schmidt,
    schmidt_vector,
)
from .measures import (
    PureMeasure,
    concurrence_pure,
    e_k,
    entropy_of_entanglement,
    geometric_pure,
    get_measure,
    registered_ids,
    robustness_pure,
    schmidt_rank,
)
from .roof import (
    EstimateResult,
    KrausChannel,
    OptimizerConfig,
    apply_unilocal_channel,
    check_block_diagonal,
    check_monotonicity_iii,
    check_subadditivity,
    convex_roof,
    extension_measure,
)
from .states import (
    DensityMatrix,
    PureState,
    SchmidtDecomposition,
    StateValidationError,
    TripartiteState,
    partial_trace,
    random_density,
    random_pure,
    random_tripartite,
    schmidt_decompose,
    tensor_product,
    trace_distance,
)
from .stateio import StateFileError, load_state, save_state, state_from_dict, state_to_dict
from .wootters import takagi, wootters_concurrence

__version__ = "0.1.0"
