"""isotower: exact 2-extension towers over the rationals, isotropy of
quadratic form systems, quaternion splitting, and corestrictions, with
independently verifiable certificates."""

from .errors import (
    AllVanish,
    DegreeTooLarge,
    DimensionTooSmall,
    DisjointnessViolation,
    IsotowerError,
    MalformedCertificate,
    MemoryGuardExceeded,
    Missing2PartDeclaration,
    PreconditionError,
    ReducibilityError,
    ReducibilityWitness,
    SingularMatrix,
    ZeroInverse,
)
from .tower import (
    Poly,
    QQ,
    TowerElement,
    TowerField,
    absolute_degree,
    elem_arith,
    elem_inv,
    embed,
    project_element,
    refine_tower,
    tower_extend,
)
from .sqrt import adjoin_sqrt, rational_sqrt, sqrt_or_nonsquare, squarefree_reduce
from .quadforms import (
    IsotropyCertificate,
    LinearFunctionalBasis,
    QFSystem,
    QuadraticForm,
    diagonalize,
    evaluate,
    isotropy_2ext,
    mix_forms,
    orthogonal_intersection,
    transfer_system,
)
from .splitting import (
    PfisterForm2,
    QuaternionAlgebra,
    SplitCertificate,
    bracket_quaternion,
    hilbert_symbol_Q,
    norm_form,
    pfister_descend,
    quadratic_slot_split,
    split_over_2ext,
    standard_quaternion,
)
from .csa import (
    CorResult,
    CyclicExtensionData,
    StructureConstantAlgebra,
    base_change_embedding_check,
    central_simple_check,
    conjugate_algebra,
    fixed_subalgebra,
    g_action_matrix,
    matrix_algebra,
    quaternion_structure_algebra,
    split_idempotent_witness,
    tensor_power_over_K,
)
from .certjson import (
    verify_cor_result,
    verify_isotropy_certificate,
    verify_split_certificate,
)

__version__ = "0.1.0"
