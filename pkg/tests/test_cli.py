import json

import numpy as np
import pytest
from click.testing import CliRunner

from lttflow.cli import main
from lttflow.data_io import read_csv


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def trained(tmp_path, runner):
    """A tiny trained checkpoint over a synthetic 2-D Gaussian."""
    data_dir = tmp_path / "data"
    res = runner.invoke(main, ["gen-data", "--kind", "gaussian", "--dim", "2",
                               "--n", "300", "--seed", "1",
                               "--out", str(data_dir)])
    assert res.exit_code == 0, res.output
    cfg = tmp_path / "train.toml"
    cfg.write_text(
        "[train]\nepochs = 3\nbatch_size = 64\nhidden_dims = [16]\nseed = 2\n"
    )
    run_dir = tmp_path / "run"
    res = runner.invoke(main, ["train", "--config", str(cfg),
                               "--dataset", str(data_dir / "dataset.npz"),
                               "--out", str(run_dir)])
    assert res.exit_code == 0, res.output
    return data_dir / "dataset.npz", run_dir / "checkpoint.json"


def test_gen_data_writes_manifest(tmp_path, runner):
    out = tmp_path / "d"
    res = runner.invoke(main, ["gen-data", "--kind", "gmm", "--dim", "1",
                               "--n", "100", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert (out / "dataset.npz").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "gen-data"
    assert "hash" in manifest


def test_calibrate_table(tmp_path, runner):
    out = tmp_path / "cal"
    res = runner.invoke(main, ["calibrate", "--snr", "0,10", "--out", str(out)])
    assert res.exit_code == 0, res.output
    header, rows = read_csv(out / "calibration.csv")
    assert header[0] == "snr_db"
    assert len(rows) == 2
    assert abs(1.0 - float(rows[0][2]) - 0.463) <= 1e-3


def test_train_outputs(trained):
    dataset, checkpoint = trained
    assert checkpoint.exists()
    loss_csv = checkpoint.parent / "loss.csv"
    header, rows = read_csv(loss_csv)
    assert header == ["step", "epoch", "loss"]
    assert len(rows) > 0


def test_train_missing_dataset_usage_error(runner, tmp_path):
    res = runner.invoke(main, ["train", "--dataset", str(tmp_path / "nope.npz"),
                               "--out", str(tmp_path / "r")])
    assert res.exit_code == 2


def test_decode_command(trained, tmp_path, runner):
    dataset, checkpoint = trained
    out = tmp_path / "dec"
    res = runner.invoke(main, ["decode", "--checkpoint", str(checkpoint),
                               "--dataset", str(dataset), "--channel", "awgn",
                               "--snr", "10", "--limit", "20",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    header, rows = read_csv(out / "decode.csv")
    assert rows[0][0] == "awgn"
    assert np.isfinite(float(rows[0][3]))


def test_sweep_snr_resume(trained, tmp_path, runner):
    dataset, checkpoint = trained
    out = tmp_path / "sweep"
    args = ["sweep-snr", "--checkpoint", str(checkpoint),
            "--dataset", str(dataset), "--snr", "5,10",
            "--channel", "awgn,rayleigh", "--limit", "10",
            "--out", str(out)]
    res = runner.invoke(main, args)
    assert res.exit_code == 0, res.output
    _, rows1 = read_csv(out / "sweep_snr.csv")
    assert len(rows1) == 4
    assert all(r[5] == "ok" for r in rows1)
    # identical settings: rows come back from the existing csv
    res = runner.invoke(main, args)
    assert res.exit_code == 0, res.output
    _, rows2 = read_csv(out / "sweep_snr.csv")
    assert rows1 == rows2


def test_sweep_steps(trained, tmp_path, runner):
    dataset, checkpoint = trained
    out = tmp_path / "steps"
    res = runner.invoke(main, ["sweep-steps", "--checkpoint", str(checkpoint),
                               "--dataset", str(dataset), "--steps", "2,5",
                               "--limit", "8", "--out", str(out)])
    assert res.exit_code == 0, res.output
    header, rows = read_csv(out / "sweep_steps.csv")
    assert [r[0] for r in rows] == ["2", "5"]


def test_verify_subset(runner):
    res = runner.invoke(main, ["verify", "--only", "2"])
    assert res.exit_code == 0, res.output
    assert "PASS landing-time-table" in res.output
