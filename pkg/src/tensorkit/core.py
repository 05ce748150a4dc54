"""Dense tensor storage, row-major unfolding/folding, norms, random generation, file IO.

Tensors are plain ``numpy.ndarray`` objects of dtype float64 in C (row-major)
order; a matrix is simply a 2-d tensor.  Modes are 0-indexed: texts that use
1-based mode numbering map mode ``n`` to ``n - 1`` here.

Unfolding follows row-major fiber ordering: the mode-``n`` unfolding of a
tensor of shape ``(I_0, ..., I_{N-1})`` is the ``I_n x prod(I_k, k != n)``
matrix whose row ``i_n`` enumerates the remaining indices lexicographically in
increasing mode order.  With C-ordered storage this makes the mode-0 unfolding
a zero-copy reshape; other modes materialize a contiguous copy.
"""

from __future__ import annotations

import struct
from math import prod

import numpy as np

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
]

_TNSR_MAGIC = b"TNSR"
_TNSR_VERSION = 1


class TensorFileError(ValueError):
    """Raised when a tensor file is malformed (bad magic/version, truncated payload)."""


def as_tensor(data) -> np.ndarray:
    """Coerce ``data`` to an owned, C-contiguous float64 tensor.

    Returns the input unchanged when it already conforms (no copy).

    Raises
    ------
    ValueError
        If the result would have order 0 or any zero-length dimension.
    """
    t = np.asarray(data, dtype=np.float64, order="C")
    if t.ndim == 0:
        raise ValueError("tensors must have order >= 1; got a 0-d input")
    if min(t.shape) < 1:
        raise ValueError(f"tensor dimensions must all be >= 1; got shape {t.shape}")
    return t


def _check_mode(tensor: np.ndarray, mode: int) -> None:
    if not 0 <= mode < tensor.ndim:
        raise ValueError(
            f"mode must be in [0, {tensor.ndim}) for an order-{tensor.ndim} tensor; got {mode}"
        )


def unfold(tensor: np.ndarray, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding of ``tensor`` with row-major fiber ordering.

    Parameters
    ----------
    tensor : ndarray
    mode : int
        Mode to unfold along, in ``range(tensor.ndim)``.

    Returns
    -------
    ndarray of shape ``(tensor.shape[mode], -1)``
        Entry ``(i_mode, j)`` equals ``tensor[i_0, ..., i_{N-1}]`` where ``j``
        enumerates the remaining indices lexicographically in increasing mode
        order.  A view (no copy) when ``mode == 0``.
    """
    tensor = np.asarray(tensor)
    _check_mode(tensor, mode)
    return np.reshape(np.moveaxis(tensor, mode, 0), (tensor.shape[mode], -1))


def fold(matrix, mode: int, shape) -> np.ndarray:
    """Exact inverse of :func:`unfold`: refold a mode-``mode`` unfolding into ``shape``."""
    matrix = np.asarray(matrix)
    shape = tuple(int(s) for s in shape)
    if not 0 <= mode < len(shape):
        raise ValueError(f"mode must be in [0, {len(shape)}); got {mode}")
    expected = (shape[mode], prod(shape) // shape[mode])
    if matrix.ndim != 2 or matrix.shape != expected:
        raise ValueError(
            f"cannot fold matrix of shape {matrix.shape} at mode {mode} into {shape}; "
            f"expected {expected}"
        )
    moved = [shape[mode]] + [s for k, s in enumerate(shape) if k != mode]
    return np.moveaxis(np.reshape(matrix, moved), 0, mode)


def vectorize(tensor: np.ndarray) -> np.ndarray:
    """Row-major flattening of ``tensor`` (equals the flattened mode-0 unfolding)."""
    return np.reshape(np.asarray(tensor), -1)


def frobenius_norm(tensor: np.ndarray) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(tensor).ravel()))


def random_gaussian(shape, seed) -> np.ndarray:
    """Tensor of i.i.d. standard normal entries; identical output for identical seed."""
    shape = tuple(int(s) for s in shape)
    if len(shape) < 1 or min(shape) < 1:
        raise ValueError(f"invalid tensor shape {shape}")
    return np.random.default_rng(seed).standard_normal(shape)


def save_tensor(tensor: np.ndarray, path) -> None:
    """Write ``tensor`` to ``path`` in the TNSR binary format.

    Layout: 4-byte magic ``TNSR``, u8 version (1), u8 order N, N little-endian
    u64 dims, then the entries as little-endian IEEE-754 f64 in row-major
    order.  No padding, no compression.
    """
    tensor = as_tensor(tensor)
    if tensor.ndim > 255:
        raise ValueError("TNSR format stores the order in one byte; order > 255 unsupported")
    with open(path, "wb") as fh:
        fh.write(_TNSR_MAGIC)
        fh.write(struct.pack("<BB", _TNSR_VERSION, tensor.ndim))
        fh.write(struct.pack(f"<{tensor.ndim}Q", *tensor.shape))
        fh.write(tensor.astype("<f8", copy=False).tobytes(order="C"))


def load_tensor(path) -> np.ndarray:
    """Read a tensor written by :func:`save_tensor`.

    Raises
    ------
    TensorFileError
        On magic/version mismatch or when the payload size does not match the
        declared shape.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 6 or raw[:4] != _TNSR_MAGIC:
        raise TensorFileError(f"{path}: not a TNSR file (bad magic)")
    version, order = struct.unpack_from("<BB", raw, 4)
    if version != _TNSR_VERSION:
        raise TensorFileError(f"{path}: unsupported TNSR version {version}")
    if order < 1:
        raise TensorFileError(f"{path}: tensor order must be >= 1")
    header_end = 6 + 8 * order
    if len(raw) < header_end:
        raise TensorFileError(f"{path}: truncated TNSR header")
    shape = struct.unpack_from(f"<{order}Q", raw, 6)
    if min(shape) < 1:
        raise TensorFileError(f"{path}: invalid dimension in shape {shape}")
    count = prod(shape)
    if len(raw) - header_end != 8 * count:
        raise TensorFileError(
            f"{path}: payload holds {(len(raw) - header_end) // 8} values, "
            f"declared shape {shape} needs {count}"
        )
    data = np.frombuffer(raw, dtype="<f8", count=count, offset=header_end)
    return data.astype(np.float64).reshape(shape)
