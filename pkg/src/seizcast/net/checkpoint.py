"""Checkpoint persistence: JSON manifest plus flat float64 parameters.

Parameters are serialized in the canonical order of
ModelParams.named_arrays (branch-major, layer-major, weights before
bias, dense last) as little-endian 64-bit floats, so a checkpoint is a
pure function of the parameter values.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import StaleCache
from .model import ModelConfig, ModelParams, params_from_flat

MANIFEST_NAME = "checkpoint.json"
PARAMS_NAME = "params.f64"
FORMAT_VERSION = 1


def save_checkpoint(
    directory: str | Path,
    params: ModelParams,
    config: ModelConfig,
    meta: dict | None = None,
) -> None:
    """Write checkpoint.json and params.f64 into directory.

    meta is free-form JSON-serializable run information (epoch, seeds,
    metrics); it is stored verbatim under the "meta" key.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    flat = params.flatten().astype("<f8")
    manifest = {
        "version": FORMAT_VERSION,
        "config": {
            "input_shape": list(config.input_shape),
            "n_filters": config.n_filters,
            "seed": config.seed,
        },
        "n_params": int(flat.size),
        "meta": meta or {},
    }
    tmp = directory / (PARAMS_NAME + ".tmp")
    flat.tofile(tmp)
    tmp.replace(directory / PARAMS_NAME)
    tmp = directory / (MANIFEST_NAME + ".tmp")
    tmp.write_text(json.dumps(manifest, indent=2) + "\n")
    tmp.replace(directory / MANIFEST_NAME)


def load_checkpoint(
    directory: str | Path,
) -> tuple[ModelParams, ModelConfig, dict]:
    """Load a checkpoint written by save_checkpoint.

    Raises:
        StaleCache: missing files, version mismatch, or a parameter file
            whose length disagrees with the manifest.
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    params_path = directory / PARAMS_NAME
    if not manifest_path.exists() or not params_path.exists():
        raise StaleCache(f"no checkpoint in {directory}")
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("version") != FORMAT_VERSION:
        raise StaleCache(
            f"checkpoint version {manifest.get('version')} != {FORMAT_VERSION}"
        )
    cfg = manifest["config"]
    config = ModelConfig(
        input_shape=tuple(cfg["input_shape"]),
        n_filters=cfg["n_filters"],
        seed=cfg["seed"],
    )
    flat = np.fromfile(params_path, dtype="<f8")
    if flat.size != manifest["n_params"]:
        raise StaleCache(
            f"parameter file holds {flat.size} values, manifest says "
            f"{manifest['n_params']}"
        )
    params = params_from_flat(flat.astype(np.float64), config)
    return params, config, manifest.get("meta", {})
