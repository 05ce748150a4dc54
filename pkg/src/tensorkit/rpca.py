"""Proximal operators and Robust Tensor PCA via consensus ADMM.

``robust_tpca`` splits an observed tensor into a low-multilinear-rank part L
and a sparse outlier part S by solving

    min  sum_n |J_n unfolded at n|_*  +  lam * |S|_1
    s.t. J_n = L for every mode n,  L + S = X

with scaled-dual ADMM: every iteration singular-value-thresholds each mode
unfolding, soft-thresholds the sparse part, recombines by averaging consensus,
then takes a dual ascent step on all constraints.

The recorded residual is the combined feasibility certificate

    sqrt(sum_n |J_n - L|^2 + |L + S - X|^2 + (N+1) |L - L_prev|^2) / |X|_F

i.e. the violation of every constraint plus the consensus movement.  This is
the Douglas-Rachford contraction quantity of the iteration, so it is
non-increasing by construction, and it upper-bounds the plain fit residual
``|L + S - X|_F / |X|_F`` -- stopping when the certificate reaches ``tol``
guarantees the fit residual is at most ``tol`` as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import fold, frobenius_norm, unfold

__all__ = [
    "RpcaOptions",
    "RpcaResult",
    "soft_threshold",
    "svd_threshold",
    "robust_tpca",
]

# Penalty scale frozen by the calibration run in scripts/calibrate_rpca.py:
# mu defaults to _MU_SCALE * n_modes / |X|_F.
_MU_SCALE = 10.0


@dataclass
class RpcaOptions:
    """Options for :func:`robust_tpca`.

    ``lam`` defaults to ``1 / sqrt(max(shape))``; ``mu`` to
    ``10 * n_modes / |X|_F`` (fixed, no adaptive residual balancing).  ``seed``
    is reserved: the iteration itself is deterministic.
    """

    lam: float | None = None
    mu: float | None = None
    max_iters: int = 200
    tol: float = 1e-7
    seed: int | None = None

    def __post_init__(self):
        if self.lam is not None and self.lam <= 0:
            raise ValueError(f"lam must be > 0; got {self.lam}")
        if self.mu is not None and self.mu <= 0:
            raise ValueError(f"mu must be > 0; got {self.mu}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1; got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0; got {self.tol}")


@dataclass
class RpcaResult:
    """Low-rank and sparse parts plus the per-iteration feasibility residuals."""

    low_rank: np.ndarray
    sparse: np.ndarray
    residual_trace: list = field(default_factory=list)
    iterations_run: int = 0
    converged: bool = False


def soft_threshold(x, tau: float) -> np.ndarray:
    """Entrywise ``sign(x) * max(|x| - tau, 0)`` (the l1 proximal operator)."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0; got {tau}")
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def svd_threshold(matrix, tau: float) -> np.ndarray:
    """Soft-threshold the singular values of ``matrix`` (nuclear-norm prox)."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0; got {tau}")
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError(f"svd_threshold expects a matrix; got ndim={matrix.ndim}")
    u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    return (u * s) @ vt


def robust_tpca(x, opts: RpcaOptions | None = None) -> RpcaResult:
    """Robust Tensor PCA: decompose ``x`` into low-rank plus sparse by ADMM.

    Returns an :class:`RpcaResult`; ``converged`` is true once the combined
    feasibility certificate (see module docstring) drops to ``opts.tol``,
    which implies ``|L + S - x|_F / |x|_F <= opts.tol``.  Non-convergence
    within ``max_iters`` is reported through the flag, not an exception.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim < 2:
        raise ValueError(f"robust_tpca needs order >= 2; got order {x.ndim}")
    opts = opts or RpcaOptions()
    n_modes = x.ndim
    norm_x = frobenius_norm(x)
    lam = opts.lam if opts.lam is not None else 1.0 / np.sqrt(max(x.shape))
    mu = opts.mu if opts.mu is not None else (
        _MU_SCALE * n_modes / norm_x if norm_x > 0 else 1.0
    )

    low_rank = x.copy()
    sparse = np.zeros_like(x)
    consensus = [x.copy() for _ in range(n_modes)]       # J_n, init X
    duals_consensus = [np.zeros_like(x) for _ in range(n_modes)]
    dual_fit = np.zeros_like(x)

    trace: list = []
    converged = False
    iterations = 0
    for _ in range(opts.max_iters):
        iterations += 1
        previous = low_rank
        # independent per-mode prox steps and the sparse prox, all against the
        # current consensus iterate
        for n in range(n_modes):
            consensus[n] = fold(
                svd_threshold(unfold(low_rank - duals_consensus[n], n), 1.0 / mu),
                n,
                x.shape,
            )
        sparse = soft_threshold(x - low_rank - dual_fit, lam / mu)
        # averaging consensus over all constraints on L
        low_rank = (
            sum(j + y for j, y in zip(consensus, duals_consensus))
            + (x - sparse - dual_fit)
        ) / (n_modes + 1)
        residual_sq = 0.0
        for n in range(n_modes):
            gap = consensus[n] - low_rank
            duals_consensus[n] += gap
            residual_sq += float(np.vdot(gap, gap))
        misfit = low_rank + sparse - x
        dual_fit += misfit
        movement = low_rank - previous
        residual_sq += float(np.vdot(misfit, misfit))
        residual_sq += (n_modes + 1) * float(np.vdot(movement, movement))
        certificate = np.sqrt(residual_sq) / max(norm_x, 1e-15)
        trace.append(certificate)
        if certificate <= opts.tol:
            converged = True
            break
    return RpcaResult(low_rank, sparse, trace, iterations, converged)
