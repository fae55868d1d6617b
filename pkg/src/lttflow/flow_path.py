"""Gaussian smoothing path, its analytic generating field, and validation
oracles (continuity-equation residual, exact marginal field for a Gaussian
source)."""

from dataclasses import dataclass

import numpy as np

from .randomness import standard_normal
from .schedule import NoiseSchedule


@dataclass(frozen=True)
class PathSample:
    """One draw on the conditional path: x_t = x1 + sigma(t) * eps."""

    x_t: np.ndarray
    x1: np.ndarray
    eps: np.ndarray
    t: float


def sample_path(x1, t, sched: NoiseSchedule, rng) -> PathSample:
    """Draw a path state at time t conditioned on the clean target x1."""
    x1 = np.asarray(x1, dtype=float)
    sig = sched.sigma(t)
    eps = standard_normal(rng, x1.shape)
    return PathSample(x_t=x1 + sig * eps, x1=x1, eps=eps, t=float(t))


def teacher_velocity(sample: PathSample, sched: NoiseSchedule) -> np.ndarray:
    """Conditional target velocity at the stored sample.

    Computed as sigma_dot(t) * eps, which equals
    (sigma_dot/sigma) * (x_t - x1) wherever sigma(t) > 0 and extends it
    continuously to t=1 (no 0/0 at the clean endpoint).
    """
    return sched.sigma_dot(sample.t) * sample.eps


def _gaussian_log_density(x, x1, sig):
    d = x.size
    r2 = float(np.dot(x - x1, x - x1))
    return -0.5 * d * np.log(2.0 * np.pi * sig * sig) - r2 / (2.0 * sig * sig)


def continuity_residual(x, t, x1, sched: NoiseSchedule, h) -> float:
    """|d/dt p + div(p u)| with the time derivative by central differences.

    The divergence term uses the closed-form Gaussian density and the
    analytic conditional field; the residual therefore measures only the
    finite-difference truncation error and shrinks like h^2.
    """
    x = np.asarray(x, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    if not (h < t < 1.0 - h):
        raise ValueError(f"need t in (h, 1-h), got t={t}, h={h}")
    sig_p = sched.sigma(t + h)
    sig_m = sched.sigma(t - h)
    if sig_p <= 0 or sig_m <= 0:
        raise ValueError("sigma(t +/- h) must stay positive")

    p_plus = np.exp(_gaussian_log_density(x, x1, sig_p))
    p_minus = np.exp(_gaussian_log_density(x, x1, sig_m))
    dpdt_fd = (p_plus - p_minus) / (2.0 * h)

    sig = sched.sigma(t)
    sdot = sched.sigma_dot(t)
    d = x.size
    r2 = float(np.dot(x - x1, x - x1))
    p = np.exp(_gaussian_log_density(x, x1, sig))
    # div(p u) = p * (sdot/sig) * (d - r2/sig^2) for the contraction field
    div_pu = p * (sdot / sig) * (d - r2 / (sig * sig))
    return abs(dpdt_fd + div_pu)


def marginal_field_gaussian(x, t, mu0, sigma0, sched: NoiseSchedule):
    """Exact marginal velocity field when the source is N(mu0, sigma0^2 I).

    This is the unique minimizer of the matching objective for a Gaussian
    source and serves as the analytic oracle for trained fields.
    """
    if sigma0 <= 0:
        raise ValueError(f"sigma0 must be positive, got {sigma0}")
    x = np.asarray(x, dtype=float)
    mu0 = np.asarray(mu0, dtype=float)
    sig = sched.sigma(t)
    sdot = sched.sigma_dot(t)
    return (sig * sdot / (sigma0 * sigma0 + sig * sig)) * (x - mu0)
