"""Reconstruction metrics: MSE, PSNR, and the PSNR gain over the raw
channel output."""

import math
from dataclasses import dataclass

import numpy as np

DELTA_PSNR_CAP = 99.0


@dataclass(frozen=True)
class MetricReport:
    mse: float
    psnr_db: float
    delta_psnr_db: float
    peak: float


def mse(a, b) -> float:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    d = a - b
    return float(np.mean(d * d))


def psnr(a, b, peak=1.0) -> float:
    """10*log10(peak^2 / mse); +inf when the inputs are identical."""
    if peak <= 0:
        raise ValueError(f"peak must be positive, got {peak}")
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


def delta_psnr(clean, decoded, received, peak=1.0, cap=DELTA_PSNR_CAP) -> float:
    """psnr(clean, decoded) - psnr(clean, received), capped at +/- cap dB."""
    pd = psnr(clean, decoded, peak)
    pr = psnr(clean, received, peak)
    if math.isinf(pd) and math.isinf(pr):
        return 0.0
    return float(np.clip(pd - pr, -cap, cap))


def report(clean, decoded, received, peak=1.0) -> MetricReport:
    return MetricReport(
        mse=mse(clean, decoded),
        psnr_db=psnr(clean, decoded, peak),
        delta_psnr_db=delta_psnr(clean, decoded, received, peak),
        peak=peak,
    )
