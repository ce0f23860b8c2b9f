"""trilab: exact and floating-point numerics for dense 3-tensors."""

from .hypermatrix import (
    FLOAT,
    RATIONAL,
    DimensionMismatch,
    Tensor3,
    TensorFormatError,
    contract,
    delta_tensor,
    frobenius_norm,
    frobenius_norm_sq,
    is_symmetric,
    load_tensor,
    mlmul,
    outer_product,
    save_tensor,
    symmetrize,
    tensor_from_json,
    tensor_to_json,
    trilinear_form,
)
from .spectral import (
    EigenPair,
    Rank1Approx,
    SearchConfig,
    SingularTriple,
    SpectralCertificate,
    best_rank1,
    eig_residual,
    find_eigenpairs_small,
    singular_residual,
    spectral_norm,
)

__version__ = "0.1.0"
