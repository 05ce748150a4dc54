"""tensorkit: dense tensor algebra, decompositions, robust tensor PCA, tensor regression.

Tensors are C-ordered float64 ``numpy.ndarray`` objects; modes are 0-indexed.
"""

from .algebra import (
    hadamard,
    khatri_rao,
    kronecker,
    mode_dot,
    moment3,
    multi_mode_dot,
    outer,
)
from .bench import BenchConfig, BenchRecord, emit_report, run_benchmark
from .core import (
    TensorFileError,
    as_tensor,
    fold,
    frobenius_norm,
    load_tensor,
    random_gaussian,
    save_tensor,
    unfold,
    vectorize,
)
from .decomposition import (
    FitOptions,
    FitReport,
    cp_als,
    nn_cp_mu,
    nn_tucker_mu,
    tucker_hooi,
    tucker_hosvd,
)
from .linalg import partial_svd
from .regression import (
    RegressionModel,
    kruskal_ridge_fit,
    load_regression_data,
    predict,
    save_regression_data,
    tucker_ridge_fit,
)
from .representations import (
    DegenerateFactorError,
    KruskalTensor,
    TuckerTensor,
    kruskal_normalize,
    kruskal_to_tensor,
    random_kruskal,
    random_tucker,
    tucker_to_tensor,
)
from .rpca import RpcaOptions, RpcaResult, robust_tpca, soft_threshold, svd_threshold
from .tensor_io import load_kruskal, load_tucker, save_kruskal, save_tucker

__version__ = "0.1.0"

__all__ = [
    "TensorFileError",
    "as_tensor",
    "unfold",
    "fold",
    "vectorize",
    "frobenius_norm",
    "random_gaussian",
    "save_tensor",
    "load_tensor",
    "mode_dot",
    "multi_mode_dot",
    "kronecker",
    "khatri_rao",
    "hadamard",
    "outer",
    "moment3",
    "KruskalTensor",
    "TuckerTensor",
    "DegenerateFactorError",
    "kruskal_to_tensor",
    "tucker_to_tensor",
    "kruskal_normalize",
    "random_kruskal",
    "random_tucker",
    "save_kruskal",
    "load_kruskal",
    "save_tucker",
    "load_tucker",
    "partial_svd",
    "FitOptions",
    "FitReport",
    "cp_als",
    "tucker_hosvd",
    "tucker_hooi",
    "nn_cp_mu",
    "nn_tucker_mu",
    "RpcaOptions",
    "RpcaResult",
    "soft_threshold",
    "svd_threshold",
    "robust_tpca",
    "RegressionModel",
    "kruskal_ridge_fit",
    "tucker_ridge_fit",
    "predict",
    "save_regression_data",
    "load_regression_data",
    "BenchConfig",
    "BenchRecord",
    "run_benchmark",
    "emit_report",
    "__version__",
]
