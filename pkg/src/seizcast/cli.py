"""Command-line orchestration for the whole pipeline.

Commands: make-synth, preprocess, train, crossval, gradcheck, report.
Exit codes: 0 success, 2 configuration error, 3 data error,
4 insufficient seizures, 5 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import PipelineConfig, config_hash, load_config
from .errors import ConfigError, InsufficientSeizures, InvalidSpec, MissingRun, SeizcastError, StaleCache
from .ingest.chbmit import format_summary
from .ingest.edf import build_edf_bytes
from .ingest.synthetic import generate_synthetic_recording
from .ingest.timeline import SubjectTimeline, from_recording, load_subject
from .net.checkpoint import save_checkpoint
from .net.gradcheck import run_all
from .net.model import ModelConfig
from .segment.dataset import Dataset, build_dataset, load_dataset, save_dataset
from .train.loop import loocv, train_fold
from .train.metrics import FoldReport

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INSUFFICIENT = 4
EXIT_VERIFY = 5

SYNTH_EDF_NAME = "syn01.edf"
SYNTH_SUMMARY_NAME = "syn-summary.txt"
FOLDS_CSV_NAME = "folds.csv"
AGGREGATE_NAME = "aggregate.json"
REPORT_CSV_NAME = "report.csv"


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _atomic_write_text(path: Path, text: str) -> None:
    _atomic_write_bytes(path, text.encode())


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(
    cfg: PipelineConfig, command: str, outputs: list[Path], inputs: list[Path] = ()
) -> None:
    out_dir = Path(cfg.out_dir)
    manifest = {
        "command": command,
        "version": __version__,
        "config_hash": config_hash(cfg.resolved),
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": {
            str(p.relative_to(out_dir)): _sha256(p) for p in outputs
        },
    }
    _atomic_write_text(
        out_dir / f"manifest-{command}.json", json.dumps(manifest, indent=2) + "\n"
    )


def _load_timeline(cfg: PipelineConfig) -> SubjectTimeline:
    if cfg.data.source == "synthetic":
        recording, annotations = generate_synthetic_recording(cfg.data.synthetic)
        return from_recording(recording, annotations, name=SYNTH_EDF_NAME)
    return load_subject(cfg.data.edf_dir, cfg.data.summary)


def _dataset_dir(cfg: PipelineConfig) -> Path:
    return Path(cfg.out_dir) / "dataset"


def _build_and_save_dataset(cfg: PipelineConfig) -> Dataset:
    timeline = _load_timeline(cfg)
    dataset = build_dataset(timeline, cfg.timing, cfg.stft, cfg.data.channels)
    save_dataset(dataset, _dataset_dir(cfg))
    return dataset


def _load_or_build_dataset(cfg: PipelineConfig) -> Dataset:
    try:
        dataset = load_dataset(_dataset_dir(cfg))
    except StaleCache:
        return _build_and_save_dataset(cfg)
    if dataset.policy != cfg.timing or dataset.stft != cfg.stft:
        return _build_and_save_dataset(cfg)
    return dataset


def _report_line(report: FoldReport) -> str:
    return (
        f"fold {report.fold_key}: acc={report.acc:.3f} tpr={report.tpr:.3f} "
        f"tnr={report.tnr:.3f} loss={report.final_loss:.4f} "
        f"epochs={report.epochs_run}"
    )


def cmd_make_synth(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    out = Path(cfg.out_dir) / "synthetic"
    recording, annotations = generate_synthetic_recording(cfg.data.synthetic)
    edf_path = out / SYNTH_EDF_NAME
    _atomic_write_bytes(edf_path, build_edf_bytes(recording))
    summary_path = out / SYNTH_SUMMARY_NAME
    _atomic_write_text(
        summary_path,
        format_summary([(SYNTH_EDF_NAME, annotations)], fs=recording.fs),
    )
    print(f"wrote {edf_path} ({recording.duration:.0f} s, "
          f"{recording.n_channels} channels)")
    print(f"wrote {summary_path} ({len(annotations)} seizures)")
    _write_manifest(cfg, "make-synth", [edf_path, summary_path])
    return EXIT_OK


def cmd_preprocess(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    dataset = _build_and_save_dataset(cfg)
    ddir = _dataset_dir(cfg)
    print(f"dataset cache: {ddir}")
    print(f"tensor shape: {dataset.tensor_shape}")
    print(f"leading seizures: {len(dataset.fold_keys)} "
          f"(fold keys {dataset.fold_keys})")
    if dataset.excluded_seizures:
        print(f"excluded (empty preictal): {dataset.excluded_seizures}")
    print(f"preictal windows: {dataset.n_preictal}")
    print(f"interictal windows: {dataset.n_interictal}")
    outputs = [ddir / name for name in ("manifest.json", "samples.f32")]
    _write_manifest(cfg, "preprocess", outputs)
    return EXIT_OK


def _model_config(cfg: PipelineConfig, dataset: Dataset) -> ModelConfig:
    return ModelConfig(
        input_shape=tuple(dataset.tensor_shape),
        n_filters=cfg.n_filters,
        seed=cfg.seeds.init,
    )


def cmd_train(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    dataset = _load_or_build_dataset(cfg)
    fold = args.fold if args.fold is not None else dataset.fold_keys[0]
    if fold not in dataset.fold_keys:
        raise ConfigError(
            f"--fold {fold} is not a usable fold key; choose from "
            f"{dataset.fold_keys}"
        )
    model_cfg = _model_config(cfg, dataset)
    params, stdzr, report = train_fold(dataset, fold, model_cfg, cfg.train, cfg.seeds)
    ckpt_dir = Path(cfg.out_dir) / f"checkpoint-fold{fold}"
    save_checkpoint(
        ckpt_dir,
        params,
        model_cfg,
        meta={
            "fold_key": fold,
            "report": report.to_dict(),
            "standardizer": stdzr.to_dict(),
            "seeds": {
                "data": cfg.seeds.data,
                "init": cfg.seeds.init,
                "train": cfg.seeds.train,
            },
            "config_hash": config_hash(cfg.resolved),
        },
    )
    print(_report_line(report))
    print(f"checkpoint: {ckpt_dir}")
    outputs = [ckpt_dir / name for name in ("checkpoint.json", "params.f64")]
    _write_manifest(cfg, "train", outputs)
    return EXIT_OK


def _folds_csv_text(reports: list[FoldReport]) -> str:
    lines = ["fold_key,acc,tpr,tnr,epochs,loss"]
    for r in reports:
        lines.append(
            f"{r.fold_key},{r.acc!r},{r.tpr!r},{r.tnr!r},"
            f"{r.epochs_run},{r.final_loss!r}"
        )
    return "\n".join(lines) + "\n"


def cmd_crossval(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    dataset = _load_or_build_dataset(cfg)
    model_cfg = _model_config(cfg, dataset)
    reports, aggregate = loocv(dataset, model_cfg, cfg.train, cfg.seeds)
    out_dir = Path(cfg.out_dir)
    csv_path = out_dir / FOLDS_CSV_NAME
    _atomic_write_text(csv_path, _folds_csv_text(reports))
    agg_path = out_dir / AGGREGATE_NAME
    _atomic_write_text(agg_path, json.dumps(aggregate, indent=2) + "\n")
    for r in reports:
        print(_report_line(r))
    print(
        f"mean over {aggregate['n_folds']} folds: "
        f"acc={aggregate['acc']['mean']:.3f} "
        f"tpr={aggregate['tpr']['mean']:.3f} "
        f"tnr={aggregate['tnr']['mean']:.3f}"
    )
    _write_manifest(cfg, "crossval", [csv_path, agg_path])
    return EXIT_OK


def cmd_gradcheck(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    rows = run_all(seed=cfg.seeds.init)
    width = max(len(r.name) for r in rows)
    for r in rows:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  max rel err {r.max_rel_err:.3e}  "
              f"(tol {r.tol:.0e})  {status}")
    if all(r.passed for r in rows):
        print("gradient checks passed")
        return EXIT_OK
    print("gradient checks FAILED")
    return EXIT_VERIFY


def _five_number(values: list[float]) -> dict:
    arr = np.array(values, dtype=np.float64)
    q1, median, q3 = np.percentile(arr, [25, 50, 75])
    return {
        "mean": float(arr.mean()),
        "min": float(arr.min()),
        "q1": float(q1),
        "median": float(median),
        "q3": float(q3),
        "max": float(arr.max()),
    }


def _read_folds_csv(path: Path) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise MissingRun(f"{path} holds no fold rows")
    return {
        name: [float(row[name]) for row in rows] for name in ("acc", "tpr", "tnr")
    }


def cmd_report(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    root = Path(cfg.out_dir)
    runs: list[tuple[str, Path]] = []
    if (root / FOLDS_CSV_NAME).exists():
        runs.append((root.name, root / FOLDS_CSV_NAME))
    for child in sorted(p for p in root.iterdir() if p.is_dir()) if root.exists() else []:
        candidate = child / FOLDS_CSV_NAME
        if candidate.exists():
            runs.append((child.name, candidate))
    if not runs:
        raise MissingRun(f"no {FOLDS_CSV_NAME} found under {root}")

    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["run", "metric", "mean", "min", "q1", "median", "q3", "max"])
    for run_name, csv_path in runs:
        columns = _read_folds_csv(csv_path)
        for metric in ("acc", "tpr", "tnr"):
            stats = _five_number(columns[metric])
            writer.writerow(
                [run_name, metric]
                + [repr(stats[k]) for k in ("mean", "min", "q1", "median", "q3", "max")]
            )
            print(
                f"{run_name:<16} {metric}  mean={stats['mean']:.3f} "
                f"min={stats['min']:.3f} q1={stats['q1']:.3f} "
                f"median={stats['median']:.3f} q3={stats['q3']:.3f} "
                f"max={stats['max']:.3f}"
            )
    report_path = root / REPORT_CSV_NAME
    _atomic_write_text(report_path, buffer.getvalue())
    print(f"wrote {report_path}")
    return EXIT_OK


_COMMANDS = {
    "make-synth": cmd_make_synth,
    "preprocess": cmd_preprocess,
    "train": cmd_train,
    "crossval": cmd_crossval,
    "gradcheck": cmd_gradcheck,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seizcast",
        description="EEG seizure-prediction pipeline: synthesize, "
        "preprocess, train, cross-validate, verify, report.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler in _COMMANDS.items():
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", type=Path, default=None,
                       help="YAML config file (defaults apply when omitted)")
        p.add_argument("--out", type=str, default=None,
                       help="output directory (overrides output.dir)")
        p.add_argument("--seed", type=int, default=None,
                       help="set the data/init/train seeds to N, N+1, N+2")
        if name == "train":
            p.add_argument("--fold", type=int, default=None,
                           help="seizure index to hold out (default: first)")
        p.set_defaults(handler=handler)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config, args.seed, args.out)
        return args.handler(cfg, args)
    except (ConfigError, InvalidSpec) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientSeizures as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (SeizcastError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
