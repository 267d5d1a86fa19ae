"""Kempf-Ness norm minimization, stabilizers and invariants on small tensor spaces."""

from .atlas import SurveyConfig, SurveyReport, run_example, run_survey
from .invariants import (
    InvariantSet,
    compute_r,
    d4_invariant_set,
    evaluate_all,
    null_cone_test,
    pullback_via_spin,
)
from .kempf_ness import (
    FlowConfig,
    FlowResult,
    FlowStatus,
    OrbitKind,
    classify_orbit,
    criticality_rank,
    is_critical,
    minimize_norm,
    moment_components,
    symplectic_pairing,
    verify_kn_minimality,
)
from .rep_model import (
    GroupElement,
    Representation,
    build_so4_pair_rep,
    build_sl2_tensor_rep,
    exp_action,
    extend_with_scalars,
    get_rep,
    spin_isomorphism,
    validate_rep,
)
from .stabilizer import (
    extended_stabilizer_lie,
    phase_check,
    stabilizer_lie,
    verify_adjoint_closure,
    verify_finite_group,
)

__version__ = "0.1.0"
