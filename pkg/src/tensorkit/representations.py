"""Factorized tensor forms: Kruskal (CP) and Tucker, reconstruction, normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import khatri_rao, multi_mode_dot
from .core import as_tensor, fold

__all__ = [
    "KruskalTensor",
    "TuckerTensor",
    "DegenerateFactorError",
    "kruskal_to_tensor",
    "tucker_to_tensor",
    "kruskal_normalize",
    "random_kruskal",
    "random_tucker",
]


class DegenerateFactorError(ValueError):
    """Raised when a factor matrix has an all-zero column where one is forbidden."""


def _check_factor(f, k) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 2 or min(f.shape) < 1:
        raise ValueError(f"factor {k} must be a non-empty matrix; got shape {f.shape}")
    return f


@dataclass(eq=False)
class KruskalTensor:
    """Weighted sum of rank-1 terms: weights vector plus per-mode factor matrices.

    ``factors[k]`` has shape ``(I_k, R)``; all factors share the column count R.
    """

    weights: np.ndarray
    factors: list

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        self.factors = [_check_factor(f, k) for k, f in enumerate(self.factors)]
        if not self.factors:
            raise ValueError("KruskalTensor needs at least one factor")
        rank = self.factors[0].shape[1]
        if rank < 1 or any(f.shape[1] != rank for f in self.factors):
            raise ValueError(
                f"factors must share a column count >= 1; got {[f.shape for f in self.factors]}"
            )
        if self.weights.shape != (rank,):
            raise ValueError(f"weights must have length {rank}; got {self.weights.shape}")

    @property
    def rank(self) -> int:
        return self.factors[0].shape[1]

    @property
    def shape(self) -> tuple:
        return tuple(f.shape[0] for f in self.factors)


@dataclass(eq=False)
class TuckerTensor:
    """Core tensor plus per-mode factor matrices; ``factors[k]`` is ``(I_k, core.shape[k])``."""

    core: np.ndarray
    factors: list

    def __post_init__(self):
        self.core = as_tensor(self.core)
        self.factors = [_check_factor(f, k) for k, f in enumerate(self.factors)]
        if len(self.factors) != self.core.ndim:
            raise ValueError(
                f"core has order {self.core.ndim} but {len(self.factors)} factors given"
            )
        for k, f in enumerate(self.factors):
            if f.shape[1] != self.core.shape[k]:
                raise ValueError(
                    f"factor {k} has {f.shape[1]} columns but core dimension is "
                    f"{self.core.shape[k]}"
                )

    @property
    def ranks(self) -> tuple:
        return self.core.shape

    @property
    def shape(self) -> tuple:
        return tuple(f.shape[0] for f in self.factors)


def kruskal_to_tensor(kt: KruskalTensor) -> np.ndarray:
    """Dense reconstruction ``sum_r weights[r] * outer(column r of each factor)``.

    Computed through the mode-0 unfolding identity (one Khatri-Rao plus one
    matrix product, folded back by a plain reshape), which is cache-friendlier
    than summing R outer products.
    """
    scaled = kt.factors[0] * kt.weights
    if len(kt.factors) == 1:
        return scaled.sum(axis=1)
    full = scaled @ khatri_rao(kt.factors[1:]).T
    return fold(full, 0, kt.shape)


def tucker_to_tensor(tt: TuckerTensor) -> np.ndarray:
    """Dense reconstruction: the core multiplied by every factor along its mode."""
    return multi_mode_dot(tt.core, tt.factors)


def kruskal_normalize(kt: KruskalTensor) -> KruskalTensor:
    """Rescale every factor column to unit 2-norm, absorbing the norms into the weights.

    Reconstruction is unchanged.  Raises :class:`DegenerateFactorError` if any
    factor column is identically zero.
    """
    weights = kt.weights.copy()
    factors = []
    for k, f in enumerate(kt.factors):
        norms = np.linalg.norm(f, axis=0)
        if np.any(norms == 0.0):
            raise DegenerateFactorError(
                f"factor {k} has an all-zero column; cannot normalize"
            )
        factors.append(f / norms)
        weights = weights * norms
    return KruskalTensor(weights, factors)


def random_kruskal(shape, rank: int, seed) -> KruskalTensor:
    """Seeded Gaussian factors with unit weights."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1; got {rank}")
    rng = np.random.default_rng(seed)
    factors = [rng.standard_normal((int(s), rank)) for s in shape]
    return KruskalTensor(np.ones(rank), factors)


def random_tucker(shape, ranks, seed) -> TuckerTensor:
    """Seeded Gaussian core and factors."""
    shape = tuple(int(s) for s in shape)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != len(shape):
        raise ValueError(f"ranks {ranks} do not match shape {shape}")
    if min(ranks) < 1:
        raise ValueError(f"ranks must be >= 1; got {ranks}")
    rng = np.random.default_rng(seed)
    core = rng.standard_normal(ranks)
    factors = [rng.standard_normal((s, r)) for s, r in zip(shape, ranks)]
    return TuckerTensor(core, factors)
