"""Leading-k singular value decomposition via Gram-matrix eigendecomposition."""

from __future__ import annotations

import numpy as np

__all__ = ["partial_svd"]

# Beyond this condition estimate the squared spectrum of the Gram matrix is too
# inaccurate; fall back to a full bidiagonalization-based SVD.
_GRAM_COND_LIMIT = 1e8


def _full_svd(matrix: np.ndarray, k: int):
    try:
        u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as err:
        raise np.linalg.LinAlgError(
            f"SVD failed to converge on a {matrix.shape} matrix: {err}"
        ) from err
    return u[:, :k], s[:k], vt[:k].T


def _fix_signs(u: np.ndarray, v: np.ndarray):
    # Largest-magnitude entry of each left singular vector is made positive.
    pivot = np.abs(u).argmax(axis=0)
    signs = np.sign(u[pivot, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, v * signs


def _finish(u, s, v):
    u, v = _fix_signs(u, v)
    return u, s, v


def partial_svd(matrix, k: int):
    """Exact leading-``k`` SVD of a dense matrix.

    Computes an orthonormal basis of the dominant subspace from the Gram
    matrix of the smaller side (one symmetric eigendecomposition), then
    recovers singular values and the other side from the SVD of the projected
    ``k x max(rows, cols)`` block.  Falls back to a full SVD when the
    condition estimate exceeds 1e8, where the squared spectrum loses accuracy.

    Returns
    -------
    (U, s, V)
        ``U``: ``rows x k`` and ``V``: ``cols x k`` with orthonormal columns,
        ``s`` non-increasing and non-negative, ``matrix ~= U @ diag(s) @ V.T``.
        The largest-magnitude entry of each column of ``U`` is positive.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError(f"partial_svd expects a matrix; got ndim={matrix.ndim}")
    rows, cols = matrix.shape
    if not 1 <= k <= min(rows, cols):
        raise ValueError(f"k must be in [1, {min(rows, cols)}]; got {k}")

    rows_side = rows <= cols
    gram = matrix @ matrix.T if rows_side else matrix.T @ matrix
    try:
        eigvals, eigvecs = np.linalg.eigh(gram)
    except np.linalg.LinAlgError:
        return _finish(*_full_svd(matrix, k))
    eigvals = np.maximum(eigvals[::-1], 0.0)
    basis = eigvecs[:, ::-1][:, :k]

    smax = np.sqrt(eigvals[0])
    skmin = np.sqrt(eigvals[k - 1])
    if smax == 0.0 or skmin == 0.0 or smax / skmin > _GRAM_COND_LIMIT:
        return _finish(*_full_svd(matrix, k))

    if rows_side:
        # basis spans the leading left subspace; SVD of the small projection
        # restores orthonormality on the right side to machine precision.
        w, s, vt = np.linalg.svd(basis.T @ matrix, full_matrices=False)
        u, v = basis @ w, vt.T
    else:
        u, s, wt = np.linalg.svd(matrix @ basis, full_matrices=False)
        v = basis @ wt.T
    return _finish(u, s, v)
