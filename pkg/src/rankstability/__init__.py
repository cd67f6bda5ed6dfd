"""Exact-arithmetic constructions and certificates for rank-metric stability.

The package builds two families of uniform almost-representations over exact
fields, as explicit matrices:

* truncations of highest-weight modules of sl_r (defect O(1/n), separated by
  central characters), and
* free-group maps driven by a symmetric integer family (defect 3/n, bounded
  away from every true representation),

together with the compression calculus relating strict and flexible rank
distances.  Every finitely checkable inequality in sight is certified with
exact rational arithmetic; nothing is ever rounded.
"""

from .errors import (
    BoundViolation,
    DimensionMismatch,
    FieldMismatch,
    PrimeDenominatorError,
    SingularMatrixError,
)
from .exactfield import (
    GF,
    QQ,
    QQI,
    DenseMatrix,
    FpElement,
    GaussianRational,
    PrimeField,
    field_from_tag,
    modular_rank_certificate,
)
from .rankmetric import RankDistance, flexible_distance, map_distance, strict_distance
from .compress import (
    CompressionFrame,
    align_compressions,
    compress,
    corner_frame,
    random_frame,
    verify_mult_defect,
    verify_rank_lower,
)
from .liealg import (
    AlmostRep,
    ChevalleyBasis,
    adjoint_rep,
    build_sl,
    complexify,
    direct_sum_rep,
    irreducible_sl2,
    pointwise_defect,
    sampled_defect,
)
from .verma import (
    UEAElement,
    VermaModule,
    build_truncation,
    casimir,
    central_character_value,
    check_highest_weight_structure,
    check_near_scalar,
    epsilon_bound,
    evaluate_uea,
    rep_distance_certificate,
    separation_certificate,
    weyl_twist,
)
from .rolli import (
    ReducedWord,
    TauFamily,
    exact_defect,
    phi_eval,
    preset_tau,
    pullback,
    witness_word,
    word_reduce,
)
from .prng import XorShift64Star

__version__ = "0.1.0"
