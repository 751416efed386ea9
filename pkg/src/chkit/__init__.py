"""chkit: exact single-time quantum logic toolkit.

Projectors and decompositions of the identity over Q(sqrt2, i), Boolean
event algebras and truth functionals, framework compatibility and
refinement, classical coarse grainings with their universal truth
functional, and an exhaustive search showing that no universal
(noncontextual) truth assignment exists in Hilbert dimension 3 or more
while one always exists classically and in dimension 2.
"""

from .errors import ChkitError
from .events import (
    Event,
    EventAlgebra,
    TruthFunctional,
    conditional_probability,
    enumerate_truth_functionals,
    eval_truth,
    event_and,
    event_complement,
    event_or,
    verify_homomorphism,
)
from .exactnum import IM, ONE, SQRT2, ZERO, Rational, Scalar
from .classical import (
    CoarseGraining,
    Indicator,
    PhaseSpace,
    common_refinement_classical,
    indicator_from_predicate,
    restrict_universal,
    universal_truth,
)
from .frameworks import (
    Framework,
    FrameworkSet,
    MEANINGLESS,
    Meaningless,
    PartialAssignment,
    QueryAnswer,
    ReasoningSession,
    TruthAssignmentFamily,
    build_universal_candidate,
    check_every_framework_principle,
    common_refinement,
    conjunction,
    frameworks_containing,
    is_compatible,
    is_refinement,
    refine_truth,
    s0s1s2_frameworks,
    session_open,
)
from .hilbert import (
    DecompositionOfIdentity,
    Matrix,
    Projector,
    Vector,
    commutes,
    complement,
    inner,
    is_projector,
    projector_from_ray,
    validate_decomposition,
)
from .nogo import (
    Exists,
    Nonexistent,
    NoncontextualAssignment,
    ParityCertificate,
    RaySet,
    builtin_dataset,
    enumerate_assignments,
    orthogonality_graph,
    parity_certificate,
    search_assignment,
    validate_rayset,
    verify_assignment,
)

__version__ = "0.1.0"

__all__ = [
    "ChkitError",
    "CoarseGraining",
    "DecompositionOfIdentity",
    "Event",
    "EventAlgebra",
    "Exists",
    "Framework",
    "FrameworkSet",
    "IM",
    "Indicator",
    "MEANINGLESS",
    "Matrix",
    "Meaningless",
    "NoncontextualAssignment",
    "Nonexistent",
    "ONE",
    "ParityCertificate",
    "PartialAssignment",
    "PhaseSpace",
    "Projector",
    "QueryAnswer",
    "Rational",
    "RaySet",
    "ReasoningSession",
    "SQRT2",
    "Scalar",
    "TruthAssignmentFamily",
    "TruthFunctional",
    "Vector",
    "ZERO",
    "build_universal_candidate",
    "builtin_dataset",
    "check_every_framework_principle",
    "common_refinement",
    "common_refinement_classical",
    "commutes",
    "complement",
    "conditional_probability",
    "conjunction",
    "enumerate_assignments",
    "enumerate_truth_functionals",
    "eval_truth",
    "event_and",
    "event_complement",
    "event_or",
    "frameworks_containing",
    "indicator_from_predicate",
    "inner",
    "is_compatible",
    "is_projector",
    "is_refinement",
    "orthogonality_graph",
    "parity_certificate",
    "projector_from_ray",
    "refine_truth",
    "restrict_universal",
    "s0s1s2_frameworks",
    "search_assignment",
    "session_open",
    "universal_truth",
    "validate_decomposition",
    "validate_rayset",
    "verify_assignment",
    "verify_homomorphism",
]
