"""Iterative decompositions: CP via ALS, Tucker via HOSVD/HOOI, non-negative variants.

Every fit returns a :class:`FitReport` carrying the per-iteration relative
reconstruction error ``|x - xhat|_F / |x|_F`` (defined as ``|xhat|_F`` when
``|x|_F == 0``, so a zero input fit to zero reports error 0).  Setting
``tol=0`` disables the stopping rule and forces exactly ``max_iters`` sweeps,
which is what the benchmark harness does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import hadamard, khatri_rao, multi_mode_dot
from .core import frobenius_norm, unfold
from .linalg import partial_svd
from .representations import (
    KruskalTensor,
    TuckerTensor,
    kruskal_to_tensor,
    tucker_to_tensor,
)

__all__ = [
    "FitOptions",
    "FitReport",
    "cp_als",
    "tucker_hosvd",
    "tucker_hooi",
    "nn_cp_mu",
    "nn_tucker_mu",
]

_MU_EPS = 1e-12
# Accelerated multiplicative updates: repeat each block's update this many
# times per sweep.  The data-dependent numerator is fixed within a block, so
# the repeats cost only small matrix products, and every repeat applies the
# same monotone, nonnegativity-preserving rule.
_MU_INNER = 10


@dataclass
class FitOptions:
    """Options shared by the iterative fits.

    ``rank`` is used by the CP-family methods, ``ranks`` by the Tucker family.
    ``init`` is ``"svd"`` (leading singular vectors of each unfolding, padded
    with seeded Gaussian columns when the rank exceeds a dimension),
    ``"random"``, or a warm-start :class:`KruskalTensor` / :class:`TuckerTensor`.
    The multiplicative-update methods ignore ``init`` and always start from
    ``|Gaussian| + 0.1`` to avoid zero-locking.
    """

    rank: int | None = None
    ranks: tuple | None = None
    max_iters: int = 100
    tol: float = 1e-8
    init: object = "svd"
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1; got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0; got {self.tol}")


@dataclass
class FitReport:
    """Per-iteration objective trace plus convergence metadata."""

    objective_trace: list = field(default_factory=list)
    iterations_run: int = 0
    converged: bool = False
    seed: int | None = None


def _relative_error(x, xhat, norm_x: float) -> float:
    if norm_x == 0.0:
        return frobenius_norm(xhat)
    return frobenius_norm(x - xhat) / norm_x


def _stop(trace, tol: float) -> bool:
    if tol <= 0 or len(trace) < 2:
        return False
    return abs(trace[-1] - trace[-2]) / max(trace[-2], 1e-15) < tol


def _pinv_psd(h: np.ndarray) -> np.ndarray:
    # Pseudo-inverse with relative cutoff 1e-12; ridge fallback for the
    # degenerate cases where even that is unstable.
    try:
        p = np.linalg.pinv(h, rcond=1e-12, hermitian=True)
        if np.all(np.isfinite(p)):
            return p
    except np.linalg.LinAlgError:
        pass
    r = h.shape[0]
    trace = float(np.trace(h))
    ridge = 1e-12 * (trace / r) if trace > 0 else 1e-12
    return np.linalg.pinv(h + ridge * np.eye(r), hermitian=True)


def _leading_left_singular(a: np.ndarray, k: int) -> np.ndarray:
    """First ``k`` left singular vectors; completes the basis when k exceeds min(a.shape)."""
    if k <= min(a.shape):
        return partial_svd(a, k)[0]
    u = np.linalg.svd(a, full_matrices=True)[0][:, :k]
    pivot = np.abs(u).argmax(axis=0)
    signs = np.sign(u[pivot, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs


def _kr_skipping(factors, skip: int) -> np.ndarray:
    others = [f for k, f in enumerate(factors) if k != skip]
    if not others:
        # empty Khatri-Rao product: 1 x R identity for the product
        return np.ones((1, factors[skip].shape[1]))
    return khatri_rao(others)


def _gram_hadamard_skipping(grams, skip: int) -> np.ndarray:
    others = [g for k, g in enumerate(grams) if k != skip]
    if not others:
        return np.ones_like(grams[skip])
    return hadamard(others)


def _cp_init_factors(x: np.ndarray, rank: int, init, rng) -> list:
    if isinstance(init, KruskalTensor):
        if init.shape != x.shape or init.rank != rank:
            raise ValueError(
                f"warm start has shape {init.shape} rank {init.rank}; "
                f"expected {x.shape} rank {rank}"
            )
        return [f.copy() for f in init.factors]
    if init == "random":
        return [rng.standard_normal((s, rank)) for s in x.shape]
    if init == "svd":
        factors = []
        for n in range(x.ndim):
            a = unfold(x, n)
            k0 = min(rank, min(a.shape))
            u = partial_svd(a, k0)[0]
            if rank > k0:
                u = np.hstack([u, rng.standard_normal((a.shape[0], rank - k0))])
            factors.append(u)
        return factors
    raise ValueError(f"unknown init {init!r}")


def cp_als(x, opts: FitOptions):
    """CP decomposition by alternating least squares.

    Per mode ``n`` the update solves the normal equations
    ``U_n <- unfold(x, n) @ KR_n @ pinv(H_n)`` with ``KR_n`` the Khatri-Rao
    product of the other factors (increasing mode order) and ``H_n`` the
    Hadamard product of their Gram matrices; the solved factor is then
    column-normalized into the weights.  The recorded objective is
    non-increasing.

    Returns
    -------
    (KruskalTensor, FitReport)
    """
    x = np.asarray(x, dtype=np.float64)
    rank = opts.rank
    if rank is None or rank < 1:
        raise ValueError(f"cp_als needs opts.rank >= 1; got {rank}")
    rng = np.random.default_rng(opts.seed)
    factors = _cp_init_factors(x, rank, opts.init, rng)
    grams = [f.T @ f for f in factors]
    weights = np.ones(rank)
    norm_x = frobenius_norm(x)
    unfoldings = [unfold(x, n) for n in range(x.ndim)]

    trace: list = []
    converged = False
    for _ in range(opts.max_iters):
        for n in range(x.ndim):
            mttkrp = unfoldings[n] @ _kr_skipping(factors, n)
            solved = mttkrp @ _pinv_psd(_gram_hadamard_skipping(grams, n))
            norms = np.linalg.norm(solved, axis=0)
            weights = norms
            safe = np.where(norms == 0.0, 1.0, norms)
            factors[n] = solved / safe
            grams[n] = factors[n].T @ factors[n]
        kt = KruskalTensor(weights, factors)
        trace.append(_relative_error(x, kruskal_to_tensor(kt), norm_x))
        if _stop(trace, opts.tol):
            converged = True
            break
    return (
        KruskalTensor(weights.copy(), [f.copy() for f in factors]),
        FitReport(trace, len(trace), converged, opts.seed),
    )


def _check_ranks(x: np.ndarray, ranks) -> tuple:
    if ranks is None:
        raise ValueError("Tucker fits need opts.ranks")
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != x.ndim:
        raise ValueError(f"{len(ranks)} ranks for an order-{x.ndim} tensor")
    for r, s in zip(ranks, x.shape):
        if not 1 <= r <= s:
            raise ValueError(f"ranks must satisfy 1 <= rank <= dim; got {ranks} for {x.shape}")
    return ranks


def tucker_hosvd(x, ranks) -> TuckerTensor:
    """Truncated higher-order SVD: per-mode leading left singular vectors, projected core."""
    x = np.asarray(x, dtype=np.float64)
    ranks = _check_ranks(x, ranks)
    factors = [_leading_left_singular(unfold(x, n), ranks[n]) for n in range(x.ndim)]
    core = multi_mode_dot(x, factors, transpose=True)
    return TuckerTensor(core, factors)


def tucker_hooi(x, opts: FitOptions):
    """Tucker decomposition by higher-order orthogonal iteration.

    Starts from the truncated HOSVD (or random orthonormal factors when
    ``opts.init == "random"``); each sweep replaces factor ``n`` by the leading
    left singular vectors of the mode-``n`` unfolding of the input projected
    through all other factors, and ends by recomputing the core.
    """
    x = np.asarray(x, dtype=np.float64)
    ranks = _check_ranks(x, opts.ranks)
    if isinstance(opts.init, TuckerTensor):
        if opts.init.shape != x.shape or opts.init.ranks != ranks:
            raise ValueError("warm start does not match the requested shape/ranks")
        factors = [f.copy() for f in opts.init.factors]
    elif opts.init == "random":
        rng = np.random.default_rng(opts.seed)
        factors = [
            np.linalg.qr(rng.standard_normal((s, r)))[0] for s, r in zip(x.shape, ranks)
        ]
    elif opts.init == "svd":
        factors = tucker_hosvd(x, ranks).factors
    else:
        raise ValueError(f"unknown init {opts.init!r}")

    norm_x = frobenius_norm(x)
    other_modes = [[k for k in range(x.ndim) if k != n] for n in range(x.ndim)]
    trace: list = []
    converged = False
    core = None
    for _ in range(opts.max_iters):
        for n in range(x.ndim):
            y = multi_mode_dot(
                x, [factors[k] for k in other_modes[n]], other_modes[n], transpose=True
            )
            factors[n] = _leading_left_singular(unfold(y, n), ranks[n])
        core = multi_mode_dot(x, factors, transpose=True)
        trace.append(_relative_error(x, multi_mode_dot(core, factors), norm_x))
        if _stop(trace, opts.tol):
            converged = True
            break
    return (
        TuckerTensor(core, factors),
        FitReport(trace, len(trace), converged, opts.seed),
    )


def _check_nonnegative(x: np.ndarray, name: str) -> None:
    if np.any(x < 0):
        raise ValueError(f"{name} requires a non-negative input tensor")


def nn_cp_mu(x, opts: FitOptions):
    """Non-negative CP by multiplicative updates.

    ``U_n <- U_n * (unfold(x, n) @ KR_n) / (U_n @ H_n + eps)`` keeps every
    factor entrywise non-negative; weights stay at one.
    """
    x = np.asarray(x, dtype=np.float64)
    _check_nonnegative(x, "nn_cp_mu")
    rank = opts.rank
    if rank is None or rank < 1:
        raise ValueError(f"nn_cp_mu needs opts.rank >= 1; got {rank}")
    rng = np.random.default_rng(opts.seed)
    factors = [np.abs(rng.standard_normal((s, rank))) + 0.1 for s in x.shape]
    grams = [f.T @ f for f in factors]
    norm_x = frobenius_norm(x)
    unfoldings = [unfold(x, n) for n in range(x.ndim)]
    weights = np.ones(rank)

    trace: list = []
    converged = False
    for _ in range(opts.max_iters):
        for n in range(x.ndim):
            numer = unfoldings[n] @ _kr_skipping(factors, n)
            h = _gram_hadamard_skipping(grams, n)
            for _ in range(_MU_INNER):
                factors[n] = factors[n] * numer / (factors[n] @ h + _MU_EPS)
            grams[n] = factors[n].T @ factors[n]
        kt = KruskalTensor(weights, factors)
        trace.append(_relative_error(x, kruskal_to_tensor(kt), norm_x))
        if _stop(trace, opts.tol):
            converged = True
            break
    return (
        KruskalTensor(weights.copy(), [f.copy() for f in factors]),
        FitReport(trace, len(trace), converged, opts.seed),
    )


def nn_tucker_mu(x, opts: FitOptions):
    """Non-negative Tucker by multiplicative updates on each factor and the core."""
    x = np.asarray(x, dtype=np.float64)
    _check_nonnegative(x, "nn_tucker_mu")
    ranks = _check_ranks(x, opts.ranks)
    rng = np.random.default_rng(opts.seed)
    core = np.abs(rng.standard_normal(ranks)) + 0.1
    factors = [np.abs(rng.standard_normal((s, r))) + 0.1 for s, r in zip(x.shape, ranks)]
    grams = [f.T @ f for f in factors]
    norm_x = frobenius_norm(x)
    other_modes = [[k for k in range(x.ndim) if k != n] for n in range(x.ndim)]

    trace: list = []
    converged = False
    for _ in range(opts.max_iters):
        for n in range(x.ndim):
            others = other_modes[n]
            y = multi_mode_dot(x, [factors[k] for k in others], others, transpose=True)
            gn = unfold(core, n)
            numer = unfold(y, n) @ gn.T
            w = multi_mode_dot(core, [grams[k] for k in others], others)
            h = unfold(w, n) @ gn.T
            for _ in range(_MU_INNER):
                factors[n] = factors[n] * numer / (factors[n] @ h + _MU_EPS)
            grams[n] = factors[n].T @ factors[n]
        numer_core = multi_mode_dot(x, factors, transpose=True)
        for _ in range(_MU_INNER):
            core = core * numer_core / (multi_mode_dot(core, grams) + _MU_EPS)
        tt = TuckerTensor(core, factors)
        trace.append(_relative_error(x, tucker_to_tensor(tt), norm_x))
        if _stop(trace, opts.tol):
            converged = True
            break
    return (
        TuckerTensor(core.copy(), [f.copy() for f in factors]),
        FitReport(trace, len(trace), converged, opts.seed),
    )
