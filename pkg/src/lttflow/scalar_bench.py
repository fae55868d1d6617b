"""Closed-form scalar Gaussian benchmark.

For X1 ~ N(0, sigma_x^2) observed through AWGN of std sigma_ch, the ideal
flow decoder is linear with a known gain; these closed forms are the
authoritative oracles for the ODE solvers and the trained fields.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import CalibrationError
from .schedule import NoiseSchedule


@dataclass(frozen=True)
class ScalarModel:
    sigma_x: float
    sigma_ch: float

    def __post_init__(self):
        if not self.sigma_x > 0:
            raise ValueError(f"sigma_x must be positive, got {self.sigma_x}")
        if self.sigma_ch < 0:
            raise ValueError(f"sigma_ch must be nonnegative, got {self.sigma_ch}")


def ltt_gain(m: ScalarModel) -> float:
    """Slope of the ideal flow decoder: sigma_x / sqrt(sigma_x^2 + sigma_ch^2)."""
    return m.sigma_x / np.hypot(m.sigma_x, m.sigma_ch)


def mmse_gain(m: ScalarModel) -> float:
    """Slope of the linear MMSE estimator: sigma_x^2 / (sigma_x^2 + sigma_ch^2)."""
    return m.sigma_x**2 / (m.sigma_x**2 + m.sigma_ch**2)


def mse_of_gain(m: ScalarModel, a: float) -> float:
    """MSE of the linear estimator a*Y; quadratic in a, minimized at mmse_gain."""
    return m.sigma_x**2 - 2.0 * a * m.sigma_x**2 + a * a * (m.sigma_x**2 + m.sigma_ch**2)


def excess_mse(m: ScalarModel) -> float:
    """Penalty of the flow decoder over MMSE; ~ sigma_ch^4 / (4 sigma_x^2) at high SNR."""
    da = ltt_gain(m) - mmse_gain(m)
    return (m.sigma_x**2 + m.sigma_ch**2) * da * da


def scalar_field(x, t, m: ScalarModel, sched: NoiseSchedule):
    """Linear velocity field of the scalar Gaussian path:
    sigma(t)*sigma_dot(t) / (sigma_x^2 + sigma(t)^2) * x."""
    sig = sched.sigma(t)
    sdot = sched.sigma_dot(t)
    return (sig * sdot / (m.sigma_x**2 + sig * sig)) * np.asarray(x, dtype=float)


def exact_scalar_decode(y, m: ScalarModel, sched: NoiseSchedule):
    """Exact t=1 solution of the scalar flow ODE started from y at
    t* = sigma_inv(sigma_ch); equals ltt_gain(m) * y."""
    if m.sigma_ch > sched.sigma_max:
        raise CalibrationError(
            f"sigma_ch={m.sigma_ch} exceeds sigma_max={sched.sigma_max}"
        )
    return ltt_gain(m) * y
