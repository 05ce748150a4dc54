"""Directory serialization for factorized forms: TNSR files plus a JSON manifest."""

from __future__ import annotations

import json
import os

import numpy as np

from .core import load_tensor, save_tensor
from .representations import KruskalTensor, TuckerTensor

__all__ = [
    "save_kruskal",
    "load_kruskal",
    "save_tucker",
    "load_tucker",
]

_MANIFEST = "manifest.json"


def _write_manifest(directory, payload) -> None:
    with open(os.path.join(directory, _MANIFEST), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _read_manifest(directory, expected_kind: str) -> dict:
    path = os.path.join(directory, _MANIFEST)
    with open(path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("kind") != expected_kind:
        raise ValueError(
            f"{path}: expected kind {expected_kind!r}, found {manifest.get('kind')!r}"
        )
    return manifest


def save_kruskal(kt: KruskalTensor, directory) -> None:
    """Write a Kruskal tensor as ``manifest.json`` plus one TNSR file per factor."""
    os.makedirs(directory, exist_ok=True)
    for k, f in enumerate(kt.factors):
        save_tensor(f, os.path.join(directory, f"factor_{k}.tnsr"))
    _write_manifest(directory, {
        "kind": "kruskal",
        "shape": list(kt.shape),
        "rank": kt.rank,
        "weights": [float(w) for w in kt.weights],
    })


def load_kruskal(directory) -> KruskalTensor:
    manifest = _read_manifest(directory, "kruskal")
    shape = manifest["shape"]
    factors = [
        load_tensor(os.path.join(directory, f"factor_{k}.tnsr")) for k in range(len(shape))
    ]
    return KruskalTensor(np.asarray(manifest["weights"], dtype=np.float64), factors)


def save_tucker(tt: TuckerTensor, directory) -> None:
    """Write a Tucker tensor as ``manifest.json``, ``core.tnsr`` and factor TNSR files."""
    os.makedirs(directory, exist_ok=True)
    save_tensor(tt.core, os.path.join(directory, "core.tnsr"))
    for k, f in enumerate(tt.factors):
        save_tensor(f, os.path.join(directory, f"factor_{k}.tnsr"))
    _write_manifest(directory, {
        "kind": "tucker",
        "shape": list(tt.shape),
        "ranks": list(tt.ranks),
    })


def load_tucker(directory) -> TuckerTensor:
    manifest = _read_manifest(directory, "tucker")
    core = load_tensor(os.path.join(directory, "core.tnsr"))
    factors = [
        load_tensor(os.path.join(directory, f"factor_{k}.tnsr"))
        for k in range(len(manifest["shape"]))
    ]
    return TuckerTensor(core, factors)
