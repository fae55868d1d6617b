import numpy as np
import pytest

from lttflow import (
    CalibrationError,
    NoiseSchedule,
    ScalarModel,
    exact_scalar_decode,
    excess_mse,
    ltt_gain,
    mmse_gain,
    mse_of_gain,
    scalar_field,
)
from lttflow.ode_decoder import DecodeConfig, integrate
from lttflow.randomness import make_rng, standard_normal


def test_gains_closed_form():
    m = ScalarModel(sigma_x=1.0, sigma_ch=0.5)
    assert ltt_gain(m) == pytest.approx(1.0 / np.sqrt(1.25))
    assert mmse_gain(m) == pytest.approx(1.0 / 1.25)


def test_gain_ordering():
    for sc in (0.1, 0.5, 1.0, 3.0):
        m = ScalarModel(1.0, sc)
        assert mmse_gain(m) < ltt_gain(m) < 1.0


def test_mse_minimized_at_mmse_gain():
    m = ScalarModel(1.3, 0.6)
    a_star = mmse_gain(m)
    for a in np.linspace(0.0, 1.2, 25):
        assert mse_of_gain(m, a) >= mse_of_gain(m, a_star) - 1e-12


def test_excess_identity():
    m = ScalarModel(0.8, 0.4)
    direct = mse_of_gain(m, ltt_gain(m)) - mse_of_gain(m, mmse_gain(m))
    assert excess_mse(m) == pytest.approx(direct, rel=1e-12)


def test_excess_high_snr_asymptote():
    ratios = []
    for sc in (0.05, 0.02, 0.01):
        m = ScalarModel(1.0, sc)
        ratios.append(excess_mse(m) / (sc**4 / 4.0))
    assert ratios[-1] == pytest.approx(1.0, abs=5e-4)
    # monotone approach
    assert abs(ratios[2] - 1.0) < abs(ratios[0] - 1.0)


def test_monte_carlo_mse():
    rng = make_rng(11)
    m = ScalarModel(1.0, 0.5)
    n = 10**5
    x = standard_normal(rng, n)
    y = x + 0.5 * standard_normal(rng, n)
    for a in (ltt_gain(m), mmse_gain(m), 0.3):
        emp = float(np.mean((a * y - x) ** 2))
        assert emp == pytest.approx(mse_of_gain(m, a), rel=2e-2)


def test_exact_decode_matches_integrator():
    m = ScalarModel(1.0, 1.0)
    sched = NoiseSchedule(sigma_max=2.0)
    t_star = sched.sigma_inv(m.sigma_ch)
    y = 2.0
    cfg = DecodeConfig(solver="midpoint", steps=200, t_start=t_star)
    numeric = integrate(lambda x, t: scalar_field(x, t, m, sched), np.array([y]), cfg)
    assert abs(float(numeric[0]) - exact_scalar_decode(y, m, sched)) <= 1e-4
    assert exact_scalar_decode(y, m, sched) == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_exact_decode_outage():
    m = ScalarModel(1.0, 1.5)
    with pytest.raises(CalibrationError):
        exact_scalar_decode(1.0, m, NoiseSchedule(sigma_max=1.0))


def test_model_validation():
    with pytest.raises(ValueError):
        ScalarModel(0.0, 0.5)
    with pytest.raises(ValueError):
        ScalarModel(1.0, -0.1)
