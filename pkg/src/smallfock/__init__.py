"""Numerics for complete interpolating sequences in small Fock spaces."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    ZERO,
    LogComplex,
    SequenceSpec,
    Side,
    SpaceParams,
    TailedSpec,
    dist_to_sequence,
    dlog,
    dlog_nearest_index,
    dlog_plus,
    node,
    separation_constant,
)
from .criterion import (  # noqa: F401
    Decision,
    Failure,
    Verdict,
    check_bounded,
    check_condition_iii,
    decide_cis,
    reindex_for_exponent,
    shift_enumeration,
    window_sup,
)
from .products import (  # noqa: F401
    TruncationPolicy,
    canonical_product,
    coarse_estimate_ratio,
    fine_estimate_ratio,
    product_derivative_at_node,
)
from .spaces import (  # noqa: F401
    QuadratureParams,
    SampleSeq,
    biorthogonal,
    eval_bound_ratio,
    eval_weight,
    interpolate,
    norm_fp,
    restriction,
    weight_phi,
    weight_sum,
    weighted_biorthogonal,
)
from .toperator import (  # noqa: F401
    TMatrixSection,
    assemble_section,
    decay_fit,
    gamma_phase_choice,
    predicted_log_entry,
    section_norms,
    t_entry,
)
