"""Ridge-regularized low-rank tensor regression with Kruskal or Tucker weights.

The model is ``y_i = <W, X_i> + b`` with the weight tensor W constrained to a
factorized form.  The objective is the squared loss plus a separable Frobenius
ridge penalty on every factor (and the Tucker core); each factor (core) update
is an exact closed-form ridge least-squares solve, jointly with the bias, so
the objective never increases.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .core import load_tensor, save_tensor
from .decomposition import FitOptions, FitReport, _stop
from .representations import (
    KruskalTensor,
    TuckerTensor,
    kruskal_to_tensor,
    tucker_to_tensor,
)

__all__ = [
    "RegressionModel",
    "kruskal_ridge_fit",
    "tucker_ridge_fit",
    "predict",
    "save_regression_data",
    "load_regression_data",
]


@dataclass
class RegressionModel:
    """Fitted factorized weight tensor, intercept, ridge coefficient, fit report."""

    weight: object
    bias: float
    reg: float
    fit_report: FitReport

    @property
    def covariate_shape(self) -> tuple:
        return self.weight.shape


def _stack_covariates(covariates) -> np.ndarray:
    tensors = [np.asarray(t, dtype=np.float64) for t in covariates]
    if not tensors:
        raise ValueError("at least one covariate tensor is required")
    shape = tensors[0].shape
    for t in tensors:
        if t.shape != shape:
            raise ValueError(
                f"covariates must share one shape; got {shape} and {t.shape}"
            )
    return np.stack(tensors)


def _check_responses(y, m: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != m:
        raise ValueError(f"{m} covariates but {y.shape[0]} responses")
    return y


def _ridge_solve(design: np.ndarray, y: np.ndarray, reg: float):
    """Minimize |y - design @ coef - b|^2 + reg * |coef|^2; bias unpenalized."""
    m, p = design.shape
    full = np.hstack([design, np.ones((m, 1))])
    gram = full.T @ full
    gram[:p, :p] += reg * np.eye(p)
    rhs = full.T @ y
    try:
        coef = np.linalg.solve(gram, rhs)
        if not np.all(np.isfinite(coef)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        coef = np.linalg.pinv(gram, hermitian=True, rcond=1e-12) @ rhs
    return coef[:p], float(coef[p])


def _inner_products(xa: np.ndarray, weight: np.ndarray) -> np.ndarray:
    return xa.reshape(xa.shape[0], -1) @ weight.ravel()


def _objective(xa, y, weight, bias, reg, penalized) -> float:
    resid = y - _inner_products(xa, weight) - bias
    return float(resid @ resid + reg * sum(float(np.sum(p * p)) for p in penalized))


def _kruskal_design(xa: np.ndarray, factors, skip: int) -> np.ndarray:
    """Rows vec(V_i) where V_i[:, r] = X_i contracted with column r of every other factor."""
    rank = factors[0].shape[1]
    cols = []
    for r in range(rank):
        tmp = xa
        removed = 0
        for k in range(len(factors)):
            if k == skip:
                continue
            tmp = np.tensordot(tmp, factors[k][:, r], axes=(1 + k - removed, 0))
            removed += 1
        cols.append(tmp)
    return np.stack(cols, axis=2).reshape(xa.shape[0], -1)


def kruskal_ridge_fit(covariates, responses, rank: int, reg: float,
                      opts: FitOptions | None = None) -> RegressionModel:
    """Fit ``y ~ <W, X> + b`` with W in Kruskal form by cyclic exact ridge updates."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1; got {rank}")
    if reg < 0:
        raise ValueError(f"reg must be >= 0; got {reg}")
    xa = _stack_covariates(covariates)
    y = _check_responses(responses, xa.shape[0])
    opts = opts or FitOptions()
    shape = xa.shape[1:]
    n_modes = len(shape)

    rng = np.random.default_rng(opts.seed)
    factors = [rng.standard_normal((s, rank)) for s in shape]
    w0 = kruskal_to_tensor(KruskalTensor(np.ones(rank), factors))
    norm_w0 = np.linalg.norm(w0.ravel())
    if norm_w0 > 0:
        factors = [f * norm_w0 ** (-1.0 / n_modes) for f in factors]
    bias = float(np.mean(y))

    trace: list = []
    converged = False
    for _ in range(opts.max_iters):
        for n in range(n_modes):
            coef, bias = _ridge_solve(_kruskal_design(xa, factors, n), y, reg)
            factors[n] = coef.reshape(shape[n], rank)
        weight = kruskal_to_tensor(KruskalTensor(np.ones(rank), factors))
        trace.append(_objective(xa, y, weight, bias, reg, factors))
        if _stop(trace, opts.tol):
            converged = True
            break
    report = FitReport(trace, len(trace), converged, opts.seed)
    return RegressionModel(
        KruskalTensor(np.ones(rank), [f.copy() for f in factors]), bias, reg, report
    )


def _tucker_project(xa: np.ndarray, factors, skip: int | None) -> np.ndarray:
    """Contract every covariate with factor transposes on all modes except ``skip``."""
    tmp = xa
    for k, f in enumerate(factors):
        if k == skip:
            continue
        tmp = np.moveaxis(np.tensordot(tmp, f, axes=(k + 1, 0)), -1, k + 1)
    return tmp


def tucker_ridge_fit(covariates, responses, ranks, reg: float,
                     opts: FitOptions | None = None) -> RegressionModel:
    """Fit ``y ~ <W, X> + b`` with W in Tucker form; factors and core updated in turn."""
    if reg < 0:
        raise ValueError(f"reg must be >= 0; got {reg}")
    xa = _stack_covariates(covariates)
    y = _check_responses(responses, xa.shape[0])
    opts = opts or FitOptions()
    shape = xa.shape[1:]
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != len(shape) or min(ranks) < 1:
        raise ValueError(f"ranks {ranks} invalid for covariate shape {shape}")
    n_modes = len(shape)

    rng = np.random.default_rng(opts.seed)
    core = rng.standard_normal(ranks)
    factors = [rng.standard_normal((s, r)) for s, r in zip(shape, ranks)]
    norm_w0 = np.linalg.norm(tucker_to_tensor(TuckerTensor(core, factors)).ravel())
    if norm_w0 > 0:
        core = core / norm_w0
    bias = float(np.mean(y))

    trace: list = []
    converged = False
    for _ in range(opts.max_iters):
        for n in range(n_modes):
            projected = _tucker_project(xa, factors, n)
            per_sample = np.moveaxis(projected, n + 1, 1).reshape(
                xa.shape[0], shape[n], -1
            )
            core_unf = np.reshape(np.moveaxis(core, n, 0), (ranks[n], -1))
            design = (per_sample @ core_unf.T).reshape(xa.shape[0], -1)
            coef, bias = _ridge_solve(design, y, reg)
            factors[n] = coef.reshape(shape[n], ranks[n])
        design = _tucker_project(xa, factors, None).reshape(xa.shape[0], -1)
        coef, bias = _ridge_solve(design, y, reg)
        core = coef.reshape(ranks)
        weight = tucker_to_tensor(TuckerTensor(core, factors))
        trace.append(_objective(xa, y, weight, bias, reg, factors + [core]))
        if _stop(trace, opts.tol):
            converged = True
            break
    report = FitReport(trace, len(trace), converged, opts.seed)
    return RegressionModel(
        TuckerTensor(core.copy(), [f.copy() for f in factors]), bias, reg, report
    )


def predict(model: RegressionModel, covariates) -> np.ndarray:
    """Responses ``<reconstructed weight, X_i> + bias`` for each covariate tensor."""
    xa = _stack_covariates(covariates)
    if xa.shape[1:] != model.covariate_shape:
        raise ValueError(
            f"covariate shape {xa.shape[1:]} does not match model shape "
            f"{model.covariate_shape}"
        )
    if isinstance(model.weight, KruskalTensor):
        weight = kruskal_to_tensor(model.weight)
    else:
        weight = tucker_to_tensor(model.weight)
    return _inner_products(xa, weight) + model.bias


_MANIFEST = "manifest.json"
_RESPONSES = "responses.csv"


def save_regression_data(covariates, responses, directory) -> None:
    """Write covariates as ordered TNSR files plus a responses file (one float per line)."""
    xa = _stack_covariates(covariates)
    y = _check_responses(responses, xa.shape[0])
    os.makedirs(directory, exist_ok=True)
    names = []
    for i, t in enumerate(xa):
        name = f"covariate_{i:05d}.tnsr"
        save_tensor(t, os.path.join(directory, name))
        names.append(name)
    with open(os.path.join(directory, _RESPONSES), "w", encoding="utf-8") as fh:
        for v in y:
            fh.write(f"{float(v)!r}\n")
    with open(os.path.join(directory, _MANIFEST), "w", encoding="utf-8") as fh:
        json.dump({"kind": "regression", "covariates": names, "responses": _RESPONSES}, fh,
                  indent=2)
        fh.write("\n")


def load_regression_data(directory):
    """Read a directory written by :func:`save_regression_data`.

    Returns ``(covariates, responses)`` with covariates in manifest order.
    """
    with open(os.path.join(directory, _MANIFEST), encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("kind") != "regression":
        raise ValueError(f"{directory}: manifest kind is not 'regression'")
    covariates = [
        load_tensor(os.path.join(directory, name)) for name in manifest["covariates"]
    ]
    with open(os.path.join(directory, manifest["responses"]), encoding="utf-8") as fh:
        responses = np.asarray([float(line) for line in fh if line.strip()])
    if len(responses) != len(covariates):
        raise ValueError(
            f"{directory}: {len(covariates)} covariates but {len(responses)} responses"
        )
    return covariates, responses
