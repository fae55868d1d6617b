"""End-to-end experiment helpers shared by the CLI, the demos, and the
verification suite: SNR calibration tables, per-channel sweep points, and
the ODE-step ablation."""

import math
import time

import numpy as np

from . import metrics
from .channel import (
    mimo_decode,
    mimo_equalize,
    pack_complex,
    rayleigh_equalize,
    unpack_complex,
)
from .ode_decoder import DecodeConfig, decode_awgn, integrate
from .randomness import complex_normal, standard_normal
from .schedule import NoiseSchedule


def snr_to_sigma(snr_db, signal_rms):
    """Channel noise std for a target SNR given the signal RMS amplitude."""
    return signal_rms * 10.0 ** (-snr_db / 20.0)


def calibrate_table(snr_list, signal_rms, sched: NoiseSchedule):
    """Landing times per SNR, in both time conventions.

    Returns rows (snr_db, sigma_ch, t_star_main, t_star_reversed, status);
    rows whose noise level exceeds sigma_max are flagged as outage instead
    of aborting the table.
    """
    rows = []
    for snr in snr_list:
        sigma_ch = snr_to_sigma(snr, signal_rms)
        if sigma_ch > sched.sigma_max:
            rows.append((snr, sigma_ch, math.nan, math.nan, "outage"))
            continue
        t_main = sched.sigma_inv(sigma_ch)
        rows.append((snr, sigma_ch, t_main, 1.0 - t_main, "ok"))
    return rows


def awgn_point(field, images, snr_db, sched, rng, solver="midpoint", steps=10,
               clamp=True, peak=1.0):
    """Transmit a batch over AWGN and decode; returns averaged metrics."""
    images = np.atleast_2d(np.asarray(images, dtype=float))
    rms = float(np.sqrt(np.mean(images**2)))
    sigma_ch = snr_to_sigma(snr_db, rms)
    y = images + sigma_ch * standard_normal(rng, images.shape)
    decoded = decode_awgn(y, sigma_ch, sched, field, solver=solver, steps=steps)
    if clamp:
        decoded = np.clip(decoded, 0.0, 1.0)
    return _batch_metrics(images, decoded, y, peak)


def rayleigh_point(field, images, snr_db, sched, rng, solver="midpoint",
                   steps=10, clamp=True, peak=1.0, debias=False,
                   fast_fading=False):
    """Per-image block-fading Rayleigh transmission with MMSE equalization."""
    images = np.atleast_2d(np.asarray(images, dtype=float))
    dim = images.shape[1]
    sym_power = 2.0 * float(np.mean(images**2))
    sigma_ch = math.sqrt(sym_power) * 10.0 ** (-snr_db / 20.0)
    lam = sigma_ch**2 / sym_power
    decoded_all, received_all = [], []
    for img in images:
        report = rayleigh_equalize(pack_complex(img), sigma_ch, lam, rng, sched,
                                   fast_fading=fast_fading)
        z = report.equalized
        t_star = float(report.t_star.min())
        if debias:
            z = z / report.alpha[0]
            sigma_land = report.sigma_eff[0] / report.alpha[0]
            t_star = sched.sigma_inv(sigma_land)
        received = unpack_complex(z, dim)
        cfg = DecodeConfig(solver=solver, steps=steps, t_start=t_star)
        decoded = integrate(field, received, cfg)
        if clamp:
            decoded = np.clip(decoded, 0.0, 1.0)
        decoded_all.append(decoded)
        received_all.append(received)
    return _batch_metrics(images, np.array(decoded_all), np.array(received_all), peak)


def mimo_point(field, images, snr_db, sched, rng, n_t=2, n_r=2,
               solver="midpoint", steps=10, clamp=True, peak=1.0,
               basis="pixel", debias=True):
    """Per-image MIMO transmission (fresh channel draw per image) with
    SVD-domain per-mode equalization."""
    images = np.atleast_2d(np.asarray(images, dtype=float))
    dim = images.shape[1]
    sym_power = 2.0 * float(np.mean(images**2))
    sigma_ch = math.sqrt(sym_power) * 10.0 ** (-snr_db / 20.0)
    lam = sigma_ch**2 / sym_power
    decoded_all, received_all = [], []
    for img in images:
        h = complex_normal(rng, (n_r, n_t))
        report = mimo_equalize(pack_complex(img), h, sigma_ch, lam, rng, sched)
        decoded = mimo_decode(report, field, sched, solver=solver, steps=steps,
                              real_len=dim, clamp_output=clamp, basis=basis,
                              debias=debias)
        # raw equalized output rotated back to the data basis, for the gain metric
        zhat = report.equalized.reshape(-1, report.n_streams)
        v = report.h_realization["V"]
        raw = unpack_complex((zhat @ v.T).ravel()[: report.n_symbols], dim)
        decoded_all.append(decoded)
        received_all.append(raw)
    return _batch_metrics(images, np.array(decoded_all), np.array(received_all), peak)


def steps_ablation(field, images, snr_db, sched, rng_factory, steps_list,
                   solver="midpoint", clamp=True, peak=1.0, timing_reps=3):
    """Quality and per-sample latency as a function of the ODE step count.

    rng_factory(seed_tag) must return a fresh generator so every step count
    sees identical channel noise.
    """
    rows = []
    for n in steps_list:
        res = awgn_point(field, images, snr_db, sched, rng_factory(),
                         solver=solver, steps=n, clamp=clamp, peak=peak)
        images_arr = np.atleast_2d(np.asarray(images, dtype=float))
        probe = images_arr[0]
        cfg = DecodeConfig(solver=solver, steps=n, t_start=0.3)
        times = []
        for _ in range(timing_reps):
            start = time.perf_counter()
            for _ in range(10):
                integrate(field, probe, cfg)
            times.append((time.perf_counter() - start) / 10.0)
        rows.append({"steps": n, "mse": res["mse"], "psnr_db": res["psnr_db"],
                     "seconds_per_sample": float(np.median(times))})
    return rows


def _batch_metrics(clean, decoded, received, peak):
    psnrs, deltas, mses = [], [], []
    for c, d, r in zip(clean, decoded, received):
        mses.append(metrics.mse(c, d))
        psnrs.append(metrics.psnr(c, d, peak))
        deltas.append(metrics.delta_psnr(c, d, r, peak))
    return {
        "mse": float(np.mean(mses)),
        "psnr_db": float(np.mean(psnrs)),
        "delta_psnr_db": float(np.mean(deltas)),
    }


def load_digits_dataset():
    """8x8 gray-scale handwritten digit images bundled with scikit-learn,
    normalized to [0, 1]."""
    from sklearn.datasets import load_digits

    from .data_io import Dataset

    raw = load_digits()
    samples = raw.images.reshape(len(raw.images), -1) / 16.0
    return Dataset(
        samples=samples,
        shape=(1, 8, 8),
        name="digits8x8",
        normalization=(0.0, 1.0 / 16.0),
        labels=raw.target.astype(np.uint8),
    )
