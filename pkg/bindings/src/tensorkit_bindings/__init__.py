"""Thin host-array bindings over the tensorkit core.

Exposes ``unfold``, ``fold``, ``parafac``, ``tucker`` and ``robust_pca`` on
plain numpy arrays of any real dtype or layout.  The boundary validates and
converts inputs (zero-copy when the array is already float64 and C-ordered),
never mutates them, and surfaces fit reports as plain dicts.  Options are
keyword arguments mirroring the core option fields exactly; defaults live in
the core and are not re-specified here.
"""

from __future__ import annotations

import numpy as np
import tensorkit as _core

__all__ = ["unfold", "fold", "parafac", "tucker", "robust_pca", "__version__"]

__version__ = _core.__version__  # versioned in lockstep with the core


def _to_core(array) -> np.ndarray:
    """Convert a host array to the core layout (float64, C-order); zero-copy when possible."""
    arr = np.asarray(array)
    if arr.dtype.kind not in "fiub":
        raise TypeError(
            f"expected a real-valued numeric array, got dtype {arr.dtype}"
        )
    return np.asarray(arr, dtype=np.float64, order="C")


def _fit_report(report) -> dict:
    return {
        "objective_trace": list(report.objective_trace),
        "iterations": report.iterations_run,
        "converged": report.converged,
        "seed": report.seed,
    }


def unfold(array, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding with row-major fiber ordering."""
    return _core.unfold(_to_core(array), mode)


def fold(array, mode: int, shape) -> np.ndarray:
    """Inverse of :func:`unfold` for the given target shape."""
    return _core.fold(_to_core(array), mode, shape)


def parafac(array, rank: int, **options):
    """CP decomposition by alternating least squares.

    Returns ``((weights, factors), report)`` where ``report`` is a dict with
    the objective trace, iteration count, convergence flag and seed.
    """
    opts = _core.FitOptions(rank=rank, **options)
    kt, report = _core.cp_als(_to_core(array), opts)
    return (kt.weights, list(kt.factors)), _fit_report(report)


def tucker(array, ranks, **options):
    """Tucker decomposition by HOSVD-initialized orthogonal iteration.

    Returns ``((core, factors), report)``.
    """
    opts = _core.FitOptions(ranks=tuple(int(r) for r in ranks), **options)
    tt, report = _core.tucker_hooi(_to_core(array), opts)
    return (tt.core, list(tt.factors)), _fit_report(report)


def robust_pca(array, **options):
    """Low-rank plus sparse split by ADMM.

    Returns ``((low_rank, sparse), report)`` with the residual trace in the
    report dict.
    """
    opts = _core.RpcaOptions(**options)
    res = _core.robust_tpca(_to_core(array), opts)
    report = {
        "residual_trace": list(res.residual_trace),
        "iterations": res.iterations_run,
        "converged": res.converged,
    }
    return (res.low_rank, res.sparse), report
