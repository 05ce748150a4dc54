"""Independent brute-force oracles shared by the test modules.

These deliberately re-derive results from first principles (index-mapping
enumeration, sums of outer products, column-wise Kronecker) so they stay
independent of the library code paths they check.
"""

from math import prod

import numpy as np


def unfold_bruteforce(tensor: np.ndarray, mode: int) -> np.ndarray:
    """Enumerate the row-major index mapping element by element."""
    shape = tensor.shape
    others = [k for k in range(tensor.ndim) if k != mode]
    n_cols = prod(shape[k] for k in others) if others else 1
    out = np.zeros((shape[mode], n_cols))
    strides = {}
    for pos, k in enumerate(others):
        strides[k] = prod(shape[m] for m in others[pos + 1:])
    for idx in np.ndindex(*shape):
        j = sum(idx[k] * strides[k] for k in others)
        out[idx[mode], j] = tensor[idx]
    return out


def outer_bruteforce(vectors) -> np.ndarray:
    shape = tuple(len(v) for v in vectors)
    out = np.zeros(shape)
    for idx in np.ndindex(*shape):
        out[idx] = prod(float(v[i]) for v, i in zip(vectors, idx))
    return out


def kruskal_bruteforce(weights, factors) -> np.ndarray:
    """Sum of rank-1 outer products, the reconstruction oracle."""
    shape = tuple(f.shape[0] for f in factors)
    out = np.zeros(shape)
    for r in range(len(weights)):
        out += weights[r] * outer_bruteforce([f[:, r] for f in factors])
    return out


def khatri_rao_bruteforce(matrices) -> np.ndarray:
    """Column-wise Kronecker product built column by column."""
    n_cols = matrices[0].shape[1]
    cols = []
    for r in range(n_cols):
        col = matrices[0][:, r]
        for m in matrices[1:]:
            col = np.kron(col, m[:, r])
        cols.append(col)
    return np.stack(cols, axis=1)


def random_shapes(rng, count, max_order=5, max_dim=6, min_order=3):
    for _ in range(count):
        order = int(rng.integers(min_order, max_order + 1))
        yield tuple(int(rng.integers(1, max_dim + 1)) for _ in range(order))


def nonincreasing(trace, slack: float) -> bool:
    return all(trace[i + 1] - trace[i] <= slack for i in range(len(trace) - 1))
