"""Command-line behavior: artifacts, exit codes, and failure mapping."""

from __future__ import annotations

import json

import pytest
import yaml

from seizcast.cli import main
from seizcast.net import conv as conv_mod

TINY_RAW = {
    "data": {
        "synthetic": {
            "n_channels": 4,
            "fs": 256.0,
            "n_seizures": 3,
            "seizure_duration": 5.0,
            "inter_seizure_gap": 90.0,
            "head": 60.0,
            "tail": 60.0,
            "sop": 30.0,
            "sph": 5.0,
        }
    },
    "timing": {
        "sop": 30.0,
        "sph": 5.0,
        "interictal_gap": 35.0,
        "leading_gap": 50.0,
        "window_len": 6.0,
        "overlap": 2.0,
    },
    "stft": {"bins_kept": [1, 32]},
    "model": {"n_filters": 2},
    "train": {"lr": 1.0e-2, "batch_size": 2, "max_epochs": 2},
}


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.yaml"
    path.write_text(yaml.safe_dump(TINY_RAW))
    return path


def run(*argv) -> int:
    return main([str(a) for a in argv])


class TestParser:
    def test_version_flag(self, capsys):
        assert run("--version") == 0

    def test_missing_command(self):
        assert run() == 2

    def test_unknown_command(self):
        assert run("frobnicate") == 2

    def test_non_integer_seed(self, tmp_path):
        assert run("gradcheck", "--seed", "lots", "--out", tmp_path) == 2


class TestConfigErrors:
    def test_unknown_key_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.yaml"
        bad.write_text(yaml.safe_dump({"timing": {"sopp": 1}}))
        assert run("preprocess", "--config", bad, "--out", tmp_path / "o") == 2
        assert "timing.sopp" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, tmp_path):
        assert run("preprocess", "--config", tmp_path / "nope.yaml", "--out", tmp_path) == 2


class TestMakeSynth:
    def test_writes_edf_summary_manifest(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "run"
        assert run("make-synth", "--config", tiny_config, "--out", out) == 0
        assert (out / "synthetic" / "syn01.edf").exists()
        assert (out / "synthetic" / "syn-summary.txt").exists()
        manifest = json.loads((out / "manifest-make-synth.json").read_text())
        assert set(manifest["outputs"]) == {
            "synthetic/syn01.edf",
            "synthetic/syn-summary.txt",
        }

    def test_rerun_produces_identical_bytes(self, tiny_config, tmp_path):
        out = tmp_path / "run"
        run("make-synth", "--config", tiny_config, "--out", out)
        first = json.loads((out / "manifest-make-synth.json").read_text())["outputs"]
        run("make-synth", "--config", tiny_config, "--out", out)
        second = json.loads((out / "manifest-make-synth.json").read_text())["outputs"]
        assert first == second


class TestPreprocess:
    def test_builds_cache(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "run"
        assert run("preprocess", "--config", tiny_config, "--out", out) == 0
        assert (out / "dataset" / "manifest.json").exists()
        assert (out / "dataset" / "samples.f32").exists()
        printed = capsys.readouterr().out
        assert "leading seizures: 3" in printed

    def test_two_seizures_exit_4(self, tmp_path):
        raw = yaml.safe_load(yaml.safe_dump(TINY_RAW))
        raw["data"]["synthetic"]["n_seizures"] = 2
        cfg = tmp_path / "two.yaml"
        cfg.write_text(yaml.safe_dump(raw))
        assert run("preprocess", "--config", cfg, "--out", tmp_path / "o") == 4

    def test_edf_source_round_trips_counts(self, tiny_config, tmp_path, capsys):
        synth_out = tmp_path / "synth"
        run("make-synth", "--config", tiny_config, "--out", synth_out)
        capsys.readouterr()

        raw = yaml.safe_load(yaml.safe_dump(TINY_RAW))
        raw["data"]["source"] = "edf"
        raw["data"]["edf_dir"] = str(synth_out / "synthetic")
        raw["data"]["summary"] = str(synth_out / "synthetic" / "syn-summary.txt")
        cfg = tmp_path / "edf.yaml"
        cfg.write_text(yaml.safe_dump(raw))

        assert run("preprocess", "--config", cfg, "--out", tmp_path / "o") == 0
        printed = capsys.readouterr().out
        assert "preictal windows: 21" in printed
        assert "interictal windows: 18" in printed

    def test_corrupt_edf_exit_3(self, tmp_path):
        edf_dir = tmp_path / "data"
        edf_dir.mkdir()
        (edf_dir / "junk.edf").write_bytes(b"\x00" * 64)
        (edf_dir / "summary.txt").write_text(
            "File Name: junk.edf\nNumber of Seizures in File: 0\n"
        )
        raw = {
            "data": {
                "source": "edf",
                "edf_dir": str(edf_dir),
                "summary": str(edf_dir / "summary.txt"),
            }
        }
        cfg = tmp_path / "edf.yaml"
        cfg.write_text(yaml.safe_dump(raw))
        assert run("preprocess", "--config", cfg, "--out", tmp_path / "o") == 3


class TestTrain:
    def test_writes_checkpoint(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "run"
        assert run("train", "--config", tiny_config, "--out", out, "--fold", "1") == 0
        ckpt = out / "checkpoint-fold1"
        assert (ckpt / "checkpoint.json").exists()
        assert (ckpt / "params.f64").exists()
        meta = json.loads((ckpt / "checkpoint.json").read_text())["meta"]
        assert meta["fold_key"] == 1

    def test_unknown_fold_exit_2(self, tiny_config, tmp_path):
        assert (
            run("train", "--config", tiny_config, "--out", tmp_path / "o", "--fold", "7")
            == 2
        )


class TestCrossval:
    def test_artifacts_and_rerun_identical(self, tiny_config, tmp_path):
        out = tmp_path / "run"
        assert run("crossval", "--config", tiny_config, "--out", out) == 0
        folds = (out / "folds.csv").read_bytes()
        lines = folds.decode().splitlines()
        assert lines[0] == "fold_key,acc,tpr,tnr,epochs,loss"
        assert len(lines) == 4
        agg = json.loads((out / "aggregate.json").read_text())
        assert agg["n_folds"] == 3

        out2 = tmp_path / "run2"
        assert run("crossval", "--config", tiny_config, "--out", out2) == 0
        assert (out2 / "folds.csv").read_bytes() == folds


class TestGradcheck:
    def test_healthy_kernels_exit_0(self, tmp_path, capsys):
        assert run("gradcheck", "--out", tmp_path / "o") == 0
        assert "gradient checks passed" in capsys.readouterr().out

    def test_injected_backward_bug_exit_5(self, tmp_path, monkeypatch, capsys):
        real = conv_mod.conv3d_backward

        def skewed(x, spec, weights, grad_out):
            gx, gw, gb = real(x, spec, weights, grad_out)
            return gx, gw * 1.01, gb  # one percent error, far over tolerance

        monkeypatch.setattr(conv_mod, "conv3d_backward", skewed)
        assert run("gradcheck", "--out", tmp_path / "o") == 5
        assert "FAIL" in capsys.readouterr().out


class TestReport:
    def test_no_runs_exit_3(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert run("report", "--out", empty) == 3

    def test_merges_runs_under_root(self, tiny_config, tmp_path, capsys):
        root = tmp_path / "all"
        run("crossval", "--config", tiny_config, "--out", root / "a")
        run("crossval", "--config", tiny_config, "--out", root / "b")
        capsys.readouterr()
        assert run("report", "--out", root) == 0
        report = (root / "report.csv").read_text().splitlines()
        assert report[0] == "run,metric,mean,min,q1,median,q3,max"
        assert len(report) == 1 + 2 * 3  # two runs, three metrics each
        assert {line.split(",")[0] for line in report[1:]} == {"a", "b"}
