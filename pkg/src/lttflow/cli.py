"""Command-line harness: training, decoding, calibration tables, SNR and
ODE-step sweeps, dataset generation, and the verification suite.

Every run writes a manifest.json (resolved config + seed + version) beside
its outputs; sweeps keyed on the manifest hash skip rows already present.
"""

import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import __version__, pipeline, verify
from .cfm_trainer import TrainConfig, train
from .data_io import (
    load_idx,
    read_csv,
    synth_gaussian,
    synth_gmm,
    write_csv,
    write_idx,
)
from .randomness import make_rng
from .schedule import NoiseSchedule
from .student_field import load_checkpoint


def _load_config(path):
    if path is None:
        return {}
    with open(path, "rb") as f:
        return tomllib.load(f)


def _manifest(out_dir, command, resolved):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {"command": command, "version": __version__, "config": resolved}
    blob = json.dumps(doc, sort_keys=True, default=str)
    doc["hash"] = hashlib.sha256(blob.encode()).hexdigest()
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, default=str)
    return doc["hash"]


def _existing_hash(out_dir):
    path = Path(out_dir) / "manifest.json"
    if not path.exists():
        return None
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f).get("hash")
    except (OSError, json.JSONDecodeError):
        return None


def _load_samples(ref):
    """Dataset reference: 'digits', an .npz from gen-data, or an IDX file."""
    if ref == "digits":
        return pipeline.load_digits_dataset().samples
    path = Path(ref)
    if not path.exists():
        raise click.UsageError(f"dataset not found: {ref}")
    if path.suffix == ".npz":
        return np.load(path)["samples"]
    return load_idx(path).samples


def _point_seed(base, channel, snr_db):
    ss = np.random.SeedSequence([base, hash(channel) & 0xFFFFFFFF,
                                 int(round(snr_db * 1000)) & 0xFFFFFFFF])
    return np.random.Generator(np.random.PCG64(ss))


@click.group()
def main():
    """Flow-based generative decoding over simulated wireless channels."""


@main.command("gen-data")
@click.option("--kind", type=click.Choice(["gaussian", "gmm", "digits-idx"]),
              default="gaussian")
@click.option("--dim", type=int, default=1)
@click.option("--n", "n_samples", type=int, default=10000)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), required=True)
def cmd_gen_data(kind, dim, n_samples, seed, out):
    """Generate a dataset (synthetic source, or digit images in IDX)."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if kind == "gaussian":
        ds = synth_gaussian(dim, 0.0, 1.0, n_samples, seed)
        np.savez(out / "dataset.npz", samples=ds.samples)
    elif kind == "gmm":
        ds = synth_gmm(dim, [(-2.0, 0.5), (2.0, 0.5)], n_samples, seed)
        np.savez(out / "dataset.npz", samples=ds.samples)
    else:
        ds = pipeline.load_digits_dataset()
        write_idx(out / "digits-images.idx", ds.samples * 255.0, ds.shape)
    _manifest(out, "gen-data", {"kind": kind, "dim": dim, "n": n_samples,
                                "seed": seed})
    click.echo(f"wrote {kind} dataset to {out}")


@main.command("train")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--dataset", "dataset_ref", default=None,
              help="'digits', an .npz file, or an IDX file")
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default="runs/train")
def cmd_train(config_path, dataset_ref, seed, out):
    """Train the student velocity field; writes checkpoint + loss CSV."""
    cfg = _load_config(config_path).get("train", {})
    dataset_ref = dataset_ref or cfg.get("dataset")
    if dataset_ref is None:
        raise click.UsageError("no dataset given (flag --dataset or [train].dataset)")
    samples = _load_samples(dataset_ref)
    resolved = {
        "dataset": str(dataset_ref),
        "epochs": int(cfg.get("epochs", 50)),
        "batch_size": int(cfg.get("batch_size", 128)),
        "learning_rate": float(cfg.get("learning_rate", 1e-3)),
        "hidden_dims": [int(h) for h in cfg.get("hidden_dims", [64, 64])],
        "time_features": int(cfg.get("time_features", 4)),
        "sigma_max": float(cfg.get("sigma_max", 1.0)),
        "seed": int(seed if seed is not None else cfg.get("seed", 0)),
        "log_every": int(cfg.get("log_every", 100)),
    }
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    _manifest(out, "train", resolved)
    train_cfg = TrainConfig(
        epochs=resolved["epochs"],
        batch_size=resolved["batch_size"],
        learning_rate=resolved["learning_rate"],
        seed=resolved["seed"],
        schedule=NoiseSchedule(sigma_max=resolved["sigma_max"]),
        dataset_ref=resolved["dataset"],
        log_every=resolved["log_every"],
        hidden_dims=tuple(resolved["hidden_dims"]),
        time_features=resolved["time_features"],
        checkpoint_path=str(out / "checkpoint.json"),
    )
    model, history = train(train_cfg, samples)
    write_csv(out / "loss.csv", ["step", "epoch", "loss"], history)
    logged = [h for h in history if h[0] % resolved["log_every"] == 0]
    for step, epoch, loss in logged[-5:]:
        click.echo(f"step {step} epoch {epoch} loss {loss:.5f}")
    click.echo(f"checkpoint: {out / 'checkpoint.json'}")


@main.command("calibrate")
@click.option("--snr", "snr_list", default="0,3,5,7,10,12,15",
              help="comma-separated SNRs in dB")
@click.option("--signal-rms", type=float, default=0.463)
@click.option("--sigma-max", type=float, default=1.0)
@click.option("--out", type=click.Path(), default="runs/calibrate")
def cmd_calibrate(snr_list, signal_rms, sigma_max, out):
    """Landing-time table per SNR, in both time conventions."""
    snrs = [float(s) for s in snr_list.split(",")]
    sched = NoiseSchedule(sigma_max=sigma_max)
    rows = pipeline.calibrate_table(snrs, signal_rms, sched)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    _manifest(out, "calibrate", {"snr": snrs, "signal_rms": signal_rms,
                                 "sigma_max": sigma_max})
    header = ["snr_db", "sigma_ch", "t_star_main", "t_star_reversed", "status"]
    write_csv(out / "calibration.csv", header, rows)
    for row in rows:
        click.echo(f"SNR {row[0]:>5} dB  sigma_ch {row[1]:.4f}  "
                   f"t* {row[2]:.4f}  t*_rev {row[3]:.4f}  {row[4]}")


@main.command("decode")
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
@click.option("--dataset", "dataset_ref", required=True)
@click.option("--channel", type=click.Choice(["awgn", "rayleigh", "mimo"]),
              default="awgn")
@click.option("--snr", type=float, default=10.0)
@click.option("--solver", type=click.Choice(["euler", "midpoint"]),
              default="midpoint")
@click.option("--steps", type=int, default=10)
@click.option("--seed", type=int, default=0)
@click.option("--debias", is_flag=True, default=False)
@click.option("--fast-fading", is_flag=True, default=False)
@click.option("--limit", type=int, default=200, help="max messages to decode")
@click.option("--out", type=click.Path(), default="runs/decode")
def cmd_decode(checkpoint, dataset_ref, channel, snr, solver, steps, seed,
               debias, fast_fading, limit, out):
    """Decode a batch of messages over one channel at one SNR."""
    model = load_checkpoint(checkpoint)
    samples = _load_samples(dataset_ref)[:limit]
    sched = NoiseSchedule()
    rng = _point_seed(seed, channel, snr)
    kwargs = dict(solver=solver, steps=steps)
    if channel == "awgn":
        res = pipeline.awgn_point(model, samples, snr, sched, rng, **kwargs)
    elif channel == "rayleigh":
        res = pipeline.rayleigh_point(model, samples, snr, sched, rng,
                                      debias=debias, fast_fading=fast_fading,
                                      **kwargs)
    else:
        res = pipeline.mimo_point(model, samples, snr, sched, rng, **kwargs)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    _manifest(out, "decode", {"checkpoint": checkpoint, "dataset": dataset_ref,
                              "channel": channel, "snr": snr, "solver": solver,
                              "steps": steps, "seed": seed, "debias": debias,
                              "fast_fading": fast_fading, "limit": limit})
    write_csv(out / "decode.csv",
              ["channel", "snr_db", "mse", "psnr_db", "delta_psnr_db"],
              [(channel, snr, res["mse"], res["psnr_db"], res["delta_psnr_db"])])
    click.echo(f"{channel} @ {snr} dB: PSNR {res['psnr_db']:.2f} dB, "
               f"dPSNR {res['delta_psnr_db']:.2f} dB")


@main.command("sweep-snr")
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
@click.option("--dataset", "dataset_ref", required=True)
@click.option("--snr", "snr_list", default="0,3,5,10,15")
@click.option("--channel", "channels", default="awgn,rayleigh,mimo")
@click.option("--solver", type=click.Choice(["euler", "midpoint"]),
              default="midpoint")
@click.option("--steps", type=int, default=10)
@click.option("--seed", type=int, default=0)
@click.option("--limit", type=int, default=200)
@click.option("--out", type=click.Path(), default="runs/sweep-snr")
def cmd_sweep_snr(checkpoint, dataset_ref, snr_list, channels, solver, steps,
                  seed, limit, out):
    """Full pipeline per (channel, SNR); one CSV row per point."""
    model = load_checkpoint(checkpoint)
    samples = _load_samples(dataset_ref)[:limit]
    sched = NoiseSchedule()
    snrs = [float(s) for s in snr_list.split(",")]
    chans = [c.strip() for c in channels.split(",")]
    resolved = {"checkpoint": checkpoint, "dataset": dataset_ref, "snr": snrs,
                "channels": chans, "solver": solver, "steps": steps,
                "seed": seed, "limit": limit}
    out = Path(out)
    csv_path = out / "sweep_snr.csv"
    prev_hash = _existing_hash(out)
    run_hash = _manifest(out, "sweep-snr", resolved)
    done = {}
    if prev_hash == run_hash and csv_path.exists():
        _, rows = read_csv(csv_path)
        done = {(r[0], float(r[1])): r for r in rows}

    def run_point(point):
        chan, snr = point
        if (chan, snr) in done:
            return done[(chan, snr)]
        rng = _point_seed(seed, chan, snr)
        try:
            fn = {"awgn": pipeline.awgn_point,
                  "rayleigh": pipeline.rayleigh_point,
                  "mimo": pipeline.mimo_point}[chan]
            res = fn(model, samples, snr, sched, rng, solver=solver, steps=steps)
            return (chan, snr, res["mse"], res["psnr_db"], res["delta_psnr_db"], "ok")
        except Exception as e:  # keep sweeping, surface the row error
            return (chan, snr, "nan", "nan", "nan", f"error: {e}")

    points = [(c, s) for c in chans for s in snrs]
    with ThreadPoolExecutor(max_workers=4) as pool:
        rows = list(pool.map(run_point, points))
    rows.sort(key=lambda r: (str(r[0]), float(r[1])))
    write_csv(csv_path,
              ["channel", "snr_db", "mse", "psnr_db", "delta_psnr_db", "status"],
              rows)
    for r in rows:
        click.echo(",".join(str(v) for v in r))


@main.command("sweep-steps")
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
@click.option("--dataset", "dataset_ref", required=True)
@click.option("--snr", type=float, default=10.0)
@click.option("--steps", "steps_list", default="2,5,10,20,50")
@click.option("--solver", type=click.Choice(["euler", "midpoint"]),
              default="midpoint")
@click.option("--seed", type=int, default=0)
@click.option("--limit", type=int, default=100)
@click.option("--out", type=click.Path(), default="runs/sweep-steps")
def cmd_sweep_steps(checkpoint, dataset_ref, snr, steps_list, solver, seed,
                    limit, out):
    """ODE-step ablation: quality and per-sample latency vs step count."""
    model = load_checkpoint(checkpoint)
    samples = _load_samples(dataset_ref)[:limit]
    sched = NoiseSchedule()
    steps = [int(s) for s in steps_list.split(",")]
    rows = pipeline.steps_ablation(
        model, samples, snr, sched,
        rng_factory=lambda: _point_seed(seed, "steps", snr),
        steps_list=steps, solver=solver)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    _manifest(out, "sweep-steps", {"checkpoint": checkpoint,
                                   "dataset": dataset_ref, "snr": snr,
                                   "steps": steps, "solver": solver,
                                   "seed": seed, "limit": limit})
    write_csv(out / "sweep_steps.csv",
              ["steps", "mse", "psnr_db", "seconds_per_sample"],
              [(r["steps"], r["mse"], r["psnr_db"], r["seconds_per_sample"])
               for r in rows])
    for r in rows:
        click.echo(f"N={r['steps']:>3}  PSNR {r['psnr_db']:.2f} dB  "
                   f"{r['seconds_per_sample'] * 1e3:.2f} ms/sample")


@main.command("verify")
@click.option("--only", default=None,
              help="comma-separated criterion numbers, e.g. '1,2,5'")
def cmd_verify(only):
    """Run the verification suite; prints one pass/fail line per criterion."""
    keys = None if only is None else [int(k) for k in only.split(",")]
    failed = 0
    for result in verify.run_all(only=keys):
        click.echo(result.line())
        failed += 0 if result.passed else 1
    if failed:
        click.echo(f"{failed} criterion(s) failed")
        sys.exit(1)
    click.echo("all criteria passed")


if __name__ == "__main__":
    main()
