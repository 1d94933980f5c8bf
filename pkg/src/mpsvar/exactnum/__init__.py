"""Generic scalars and dense exact/numeric linear algebra."""

from .linalg import (
    DEFAULT_FLOAT_TOL,
    DenseMatrix,
    exact_rank,
    kernel_from_rref,
    kernel_mod_p,
    SingularMatrixError,
    mat_inverse,
    mat_inverse_2x2,
    numeric_rank,
    rank_mod_p,
    rref_kernel,
    rref_mod_p,
    rref_rational,
)
from .scalars import (
    COMPLEX_FLOAT,
    DEFAULT_PRIME,
    RATIONAL,
    SECOND_PRIME,
    Kind,
    KindMismatchError,
    Mod,
    QuadExt,
    adjoin_sqrt,
    common_kind,
    crt_pair,
    exact_sqrt,
    is_prime,
    is_scalar,
    kind_of,
    prime_field,
    rational_reconstruct,
    to_kind,
)
