"""Multilinear products: n-mode products, Kronecker/Khatri-Rao/Hadamard, outer products.

The Khatri-Rao product runs in increasing mode order, consistent with the
row-major unfolding, so that ``unfold(T, n) == U_n @ khatri_rao(others).T``
holds for sums of rank-1 terms (see :mod:`tensorkit.representations`).
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .core import fold, unfold

__all__ = [
    "mode_dot",
    "multi_mode_dot",
    "kronecker",
    "khatri_rao",
    "hadamard",
    "outer",
    "moment3",
]


def mode_dot(tensor: np.ndarray, matrix_or_vector, mode: int) -> np.ndarray:
    """n-mode product of ``tensor`` with a matrix or vector along ``mode``.

    With a matrix ``u`` of shape ``(J, I_mode)`` the result replaces dimension
    ``I_mode`` by ``J`` and satisfies ``unfold(result, mode) == u @ unfold(tensor, mode)``.
    With a vector of length ``I_mode`` that mode is contracted away and the
    order drops by one (an order-1 tensor contracts to a 0-d scalar).
    """
    tensor = np.asarray(tensor)
    u = np.asarray(matrix_or_vector, dtype=np.float64)
    if not 0 <= mode < tensor.ndim:
        raise ValueError(f"mode must be in [0, {tensor.ndim}); got {mode}")
    if u.ndim == 2:
        if u.shape[0] < 1 or u.shape[1] != tensor.shape[mode]:
            raise ValueError(
                f"matrix of shape {u.shape} cannot contract mode {mode} "
                f"of size {tensor.shape[mode]}"
            )
        new_shape = list(tensor.shape)
        new_shape[mode] = u.shape[0]
        return fold(u @ unfold(tensor, mode), mode, new_shape)
    if u.ndim == 1:
        if u.shape[0] != tensor.shape[mode]:
            raise ValueError(
                f"vector of length {u.shape[0]} cannot contract mode {mode} "
                f"of size {tensor.shape[mode]}"
            )
        res = u @ unfold(tensor, mode)
        remaining = tuple(s for k, s in enumerate(tensor.shape) if k != mode)
        return res.reshape(remaining)
    raise ValueError(f"mode_dot expects a matrix or vector; got ndim={u.ndim}")


def multi_mode_dot(tensor: np.ndarray, matrices, modes=None, transpose: bool = False) -> np.ndarray:
    """Apply :func:`mode_dot` with several matrices, in increasing mode order.

    Parameters
    ----------
    tensor : ndarray
    matrices : sequence of ndarray
        One matrix per entry of ``modes``.
    modes : sequence of int, optional
        Distinct modes; defaults to ``range(len(matrices))``.
    transpose : bool
        If true, each matrix is transposed before application (projects onto
        the column space when the matrices have orthonormal columns).
    """
    matrices = list(matrices)
    if modes is None:
        modes = list(range(len(matrices)))
    else:
        modes = [int(m) for m in modes]
    if len(modes) != len(matrices):
        raise ValueError(f"{len(matrices)} matrices but {len(modes)} modes")
    if len(set(modes)) != len(modes):
        raise ValueError(f"modes must be distinct; got {modes}")
    res = np.asarray(tensor)
    for mode, matrix in sorted(zip(modes, matrices), key=lambda pair: pair[0]):
        matrix = np.asarray(matrix)
        res = mode_dot(res, matrix.T if transpose else matrix, mode)
    return res


def kronecker(matrices) -> np.ndarray:
    """Kronecker product of a non-empty sequence of matrices, folded left-to-right."""
    matrices = [np.asarray(m, dtype=np.float64) for m in matrices]
    if not matrices:
        raise ValueError("kronecker requires at least one matrix")
    for m in matrices:
        if m.ndim != 2:
            raise ValueError(f"kronecker expects matrices; got ndim={m.ndim}")
    return reduce(np.kron, matrices)


def khatri_rao(matrices) -> np.ndarray:
    """Column-wise Kronecker product of matrices sharing a column count.

    Column ``r`` of the result is the Kronecker product of column ``r`` of each
    input, in list order; the result has ``prod(rows_i)`` rows.
    """
    matrices = [np.asarray(m, dtype=np.float64) for m in matrices]
    if not matrices:
        raise ValueError("khatri_rao requires at least one matrix")
    n_cols = matrices[0].shape[1] if matrices[0].ndim == 2 else -1
    for m in matrices:
        if m.ndim != 2 or m.shape[1] != n_cols:
            raise ValueError(
                "khatri_rao requires 2-d matrices with a shared column count; "
                f"got shapes {[m.shape for m in matrices]}"
            )
    def _kr(a, b):
        return (a[:, None, :] * b[None, :, :]).reshape(-1, n_cols)
    return reduce(_kr, matrices)


def hadamard(matrices) -> np.ndarray:
    """Elementwise product of same-shape matrices."""
    matrices = [np.asarray(m, dtype=np.float64) for m in matrices]
    if not matrices:
        raise ValueError("hadamard requires at least one matrix")
    shape = matrices[0].shape
    for m in matrices:
        if m.shape != shape:
            raise ValueError(
                f"hadamard requires identical shapes; got {[m.shape for m in matrices]}"
            )
    return reduce(np.multiply, matrices)


def outer(vectors) -> np.ndarray:
    """Order-N outer product: entry ``(i_1, ..., i_N)`` is ``prod_k v_k[i_k]``."""
    vectors = [np.asarray(v, dtype=np.float64) for v in vectors]
    if not vectors:
        raise ValueError("outer requires at least one vector")
    for v in vectors:
        if v.ndim != 1:
            raise ValueError(f"outer expects vectors; got ndim={v.ndim}")
    return reduce(np.multiply.outer, vectors)


def moment3(samples) -> np.ndarray:
    """Empirical third-order moment ``mean_i x_i (x) x_i (x) x_i`` of d-vectors.

    The result is exactly permutation-symmetric: every entry is gathered from
    its index-sorted canonical position, so symmetry is bitwise rather than
    up to float rounding.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 2:
        if x.ndim == 1 or not len(samples):
            raise ValueError("moment3 expects a non-empty list of equal-length vectors")
        raise ValueError("moment3 samples are ragged or not 1-d")
    if x.shape[0] < 1:
        raise ValueError("moment3 requires at least one sample")
    raw = np.einsum("ni,nj,nk->ijk", x, x, x) / x.shape[0]
    idx = np.sort(np.stack(np.meshgrid(*[np.arange(x.shape[1])] * 3, indexing="ij")), axis=0)
    return raw[idx[0], idx[1], idx[2]]
