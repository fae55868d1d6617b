"""Noise schedule sigma(t): the single object every other module agrees on.

sigma maps path time t in [0,1] to a noise standard deviation, decreasing
strictly from sigma_max at t=0 to 0 at t=1. Its inverse turns a measured
channel noise level into a landing time on the path.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import CalibrationError


class ScheduleKind(Enum):
    LINEAR = "linear"


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError(f"path time must lie in [0, 1], got {t}")
    return t


@dataclass(frozen=True)
class NoiseSchedule:
    sigma_max: float = 1.0
    kind: ScheduleKind = ScheduleKind.LINEAR

    def __post_init__(self):
        if not self.sigma_max > 0:
            raise ValueError(f"sigma_max must be positive, got {self.sigma_max}")
        if self.kind is not ScheduleKind.LINEAR:
            raise ValueError(f"unsupported schedule kind: {self.kind}")

    def sigma(self, t):
        """Noise std at time t; sigma_max*(1 - t) for the linear schedule."""
        t = _check_time(t)
        out = self.sigma_max * (1.0 - t)
        return float(out) if out.ndim == 0 else out

    def sigma_dot(self, t):
        """d sigma / dt; constant -sigma_max for the linear schedule."""
        t = _check_time(t)
        out = np.full_like(t, -self.sigma_max)
        return float(out) if out.ndim == 0 else out

    def sigma_inv(self, level):
        """Landing time t* with sigma(t*) = level.

        Raises CalibrationError when the channel is noisier than the path
        supports (level > sigma_max).
        """
        level = np.asarray(level, dtype=float)
        if np.any(level < 0.0):
            raise ValueError(f"noise level must be nonnegative, got {level}")
        if np.any(level > self.sigma_max):
            raise CalibrationError(
                f"noise level {level} exceeds sigma_max={self.sigma_max}"
            )
        out = 1.0 - level / self.sigma_max
        return float(out) if out.ndim == 0 else out
