"""Fixed-iteration benchmark harness and its ``bench`` command-line entry point.

Protocol: for each (method, shape, rank) a seeded random tensor is generated
(outside the timed region), the method runs with the stopping rule disabled so
it performs exactly the configured number of iterations, and the wall time of
the fit call alone is recorded.  One warm-up repetition runs first and is
discarded; the remaining repeats produce the samples whose mean and standard
deviation are reported.  Initialization happens inside the timed fit call.

``TK_THREADS`` caps the BLAS thread pools for the whole invocation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .core import random_gaussian
from .decomposition import FitOptions, cp_als, nn_cp_mu, nn_tucker_mu, tucker_hooi
from .rpca import RpcaOptions, robust_tpca

__all__ = ["BenchConfig", "BenchRecord", "run_benchmark", "emit_report", "main"]

METHODS = ("cp", "tucker", "nncp", "nntucker", "rpca")
_TUCKER_FAMILY = ("tucker", "nntucker")

CSV_COLUMNS = "method,shape,rank,iterations,repeats,mean_s,std_s,samples_s"


@dataclass
class BenchConfig:
    """One benchmark run: method, problem size, and the fixed-iteration protocol knobs."""

    method: str
    shape: tuple
    rank: object = None          # int for cp/nncp, tuple for tucker/nntucker, None for rpca
    iterations: int = 100
    repeats: int = 10
    seed: int = 42
    init: str = "random"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        self.shape = tuple(int(s) for s in self.shape)
        if len(self.shape) < 1 or min(self.shape) < 1:
            raise ValueError(f"invalid shape {self.shape}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1; got {self.iterations}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1; got {self.repeats}")
        if self.init not in ("svd", "random"):
            raise ValueError(f"init must be 'svd' or 'random'; got {self.init!r}")
        if self.method in _TUCKER_FAMILY:
            if self.rank is None:
                raise ValueError(f"{self.method} requires --rank")
            ranks = self.rank if isinstance(self.rank, (tuple, list)) else (
                (self.rank,) * len(self.shape)
            )
            if len(ranks) != len(self.shape):
                raise ValueError(f"rank {self.rank} does not match shape {self.shape}")
            self.rank = tuple(int(r) for r in ranks)
        elif self.method in ("cp", "nncp"):
            if self.rank is None:
                raise ValueError(f"{self.method} requires --rank")
            if isinstance(self.rank, (tuple, list)):
                if len(self.rank) != 1:
                    raise ValueError(f"{self.method} takes a single rank; got {self.rank}")
                self.rank = self.rank[0]
            self.rank = int(self.rank)
        else:  # rpca ignores rank
            self.rank = None


@dataclass
class BenchRecord:
    """Wall-time samples for one configuration, with their mean and standard deviation."""

    method: str
    shape: tuple
    rank: object
    iterations: int
    repeats: int
    samples_s: list = field(default_factory=list)
    mean_s: float = 0.0
    std_s: float = 0.0


def _make_input(cfg: BenchConfig) -> np.ndarray:
    x = random_gaussian(cfg.shape, cfg.seed)
    if cfg.method in ("nncp", "nntucker"):
        # multiplicative-update methods require non-negative input
        x = np.abs(x)
    return x


def _make_fit(cfg: BenchConfig, x: np.ndarray):
    if cfg.method == "rpca":
        opts = RpcaOptions(max_iters=cfg.iterations, tol=0.0)
        return lambda: robust_tpca(x, opts).iterations_run
    fit_opts = FitOptions(
        rank=cfg.rank if cfg.method in ("cp", "nncp") else None,
        ranks=cfg.rank if cfg.method in _TUCKER_FAMILY else None,
        max_iters=cfg.iterations,
        tol=0.0,
        init=cfg.init,
        seed=cfg.seed,
    )
    fn = {"cp": cp_als, "tucker": tucker_hooi, "nncp": nn_cp_mu, "nntucker": nn_tucker_mu}
    method = fn[cfg.method]
    return lambda: method(x, fit_opts)[1].iterations_run


def run_benchmark(configs) -> list:
    """Execute every configuration strictly sequentially and return the records."""
    if isinstance(configs, BenchConfig):
        configs = [configs]
    configs = list(configs)
    if not configs:
        raise ValueError("no benchmark configurations given")
    records = []
    for cfg in configs:
        x = _make_input(cfg)
        fit = _make_fit(cfg, x)
        fit()  # warm-up, excluded from the samples
        samples = []
        for _ in range(cfg.repeats):
            start = time.perf_counter()
            iterations_run = fit()
            samples.append(time.perf_counter() - start)
            if iterations_run != cfg.iterations:
                raise RuntimeError(
                    f"{cfg.method} ran {iterations_run} iterations; "
                    f"expected exactly {cfg.iterations}"
                )
        records.append(BenchRecord(
            method=cfg.method,
            shape=cfg.shape,
            rank=cfg.rank,
            iterations=cfg.iterations,
            repeats=cfg.repeats,
            samples_s=samples,
            mean_s=float(np.mean(samples)),
            std_s=float(np.std(samples)),
        ))
    return records


def _dims(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (tuple, list)):
        return "x".join(str(int(v)) for v in value)
    return str(int(value))


def _render_csv(records) -> str:
    lines = [CSV_COLUMNS]
    for r in records:
        lines.append(",".join([
            r.method,
            _dims(r.shape),
            _dims(r.rank),
            str(r.iterations),
            str(r.repeats),
            repr(r.mean_s),
            repr(r.std_s),
            ";".join(repr(s) for s in r.samples_s),
        ]))
    return "\n".join(lines) + "\n"


def _render_json(records) -> str:
    payload = {"records": [
        {
            "method": r.method,
            "shape": list(r.shape),
            "rank": list(r.rank) if isinstance(r.rank, (tuple, list)) else r.rank,
            "iterations": r.iterations,
            "repeats": r.repeats,
            "mean_s": r.mean_s,
            "std_s": r.std_s,
            "samples_s": list(r.samples_s),
        }
        for r in records
    ]}
    return json.dumps(payload, indent=2) + "\n"


def emit_report(records, format: str, path) -> None:
    """Write records to ``path`` as CSV or JSON; byte-stable for identical records."""
    records = list(records)
    if not records:
        raise ValueError("emit_report needs at least one record")
    if format == "csv":
        text = _render_csv(records)
    elif format == "json":
        text = _render_json(records)
    else:
        raise ValueError(f"format must be 'csv' or 'json'; got {format!r}")
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _parse_dims(text: str):
    try:
        return tuple(int(p) for p in str(text).split(","))
    except ValueError as err:
        raise ValueError(f"cannot parse dimension list {text!r}") from err


def _config_from_mapping(entry: dict) -> BenchConfig:
    known = {"method", "shape", "rank", "iterations", "iters", "repeats", "seed", "init"}
    unknown = set(entry) - known
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    shape = entry.get("shape")
    if isinstance(shape, str):
        shape = _parse_dims(shape)
    rank = entry.get("rank")
    if isinstance(rank, str):
        rank = _parse_dims(rank)
    return BenchConfig(
        method=entry.get("method", ""),
        shape=tuple(shape or ()),
        rank=rank,
        iterations=int(entry.get("iterations", entry.get("iters", 100))),
        repeats=int(entry.get("repeats", 10)),
        seed=int(entry.get("seed", 42)),
        init=entry.get("init", "random"),
    )


def _load_config_file(path) -> list:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("runs", [data])
    if not isinstance(data, list):
        raise ValueError(f"{path}: config must be an object or a list of runs")
    return [_config_from_mapping(entry) for entry in data]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Fixed-iteration decomposition benchmarks: seeded random input, "
                    "stopping rule disabled, one discarded warm-up, wall time of the "
                    "fit call only (initialization included, generation excluded).",
    )
    parser.add_argument("--method", choices=METHODS, help="method to benchmark")
    parser.add_argument("--shape", help="comma-separated dims, e.g. 50,50,50")
    parser.add_argument("--rank", help="rank (cp/nncp) or comma-separated ranks (tucker)")
    parser.add_argument("--iters", type=int, default=100, help="fixed iteration count")
    parser.add_argument("--repeats", type=int, default=10, help="timed repetitions")
    parser.add_argument("--seed", type=int, default=42, help="RNG seed")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default="-", help="output path (default: stdout)")
    parser.add_argument("--init", choices=("svd", "random"), default="random",
                        help="factor initialization for cp/tucker")
    parser.add_argument("--config", help="JSON file with one run or {'runs': [...]}")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.config:
            configs = _load_config_file(args.config)
        else:
            if not args.method or not args.shape:
                raise ValueError("--method and --shape are required (or use --config)")
            configs = [BenchConfig(
                method=args.method,
                shape=_parse_dims(args.shape),
                rank=_parse_dims(args.rank) if args.rank else None,
                iterations=args.iters,
                repeats=args.repeats,
                seed=args.seed,
                init=args.init,
            )]
        threads = os.environ.get("TK_THREADS")
        limits = int(threads) if threads else None
        with threadpool_limits(limits=limits):
            records = run_benchmark(configs)
        emit_report(records, args.format, args.out)
    except (ValueError, RuntimeError, json.JSONDecodeError) as err:
        print(f"bench: error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"bench: io error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
