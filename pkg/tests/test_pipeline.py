import math

import numpy as np
import pytest

from lttflow import NoiseSchedule, pipeline
from lttflow.randomness import make_rng

SCHED = NoiseSchedule()

REFERENCE_T_REV = {
    0: 0.463, 3: 0.328, 5: 0.261, 7: 0.207, 10: 0.147, 12: 0.116, 15: 0.082,
}


def test_snr_to_sigma():
    assert pipeline.snr_to_sigma(0.0, 1.0) == 1.0
    assert pipeline.snr_to_sigma(20.0, 1.0) == pytest.approx(0.1)
    assert pipeline.snr_to_sigma(10.0, 0.463) == pytest.approx(0.463 / math.sqrt(10))


def test_calibration_table_reference_values():
    rows = pipeline.calibrate_table(sorted(REFERENCE_T_REV), 0.463, SCHED)
    for row in rows:
        snr, sigma_ch, t_main, t_rev, status = row
        assert status == "ok"
        assert t_main + t_rev == pytest.approx(1.0)
        assert abs(t_rev - REFERENCE_T_REV[snr]) <= 1e-3


def test_calibration_outage_row():
    rows = pipeline.calibrate_table([-10.0, 10.0], 0.5, SCHED)
    assert rows[0][4] == "outage"
    assert math.isnan(rows[0][2])
    assert rows[1][4] == "ok"


def test_calibration_monotone_in_snr():
    rows = pipeline.calibrate_table(np.arange(0, 16), 0.463, SCHED)
    t_mains = [r[2] for r in rows]
    assert all(b > a for a, b in zip(t_mains, t_mains[1:]))


def test_digits_dataset_normalization():
    ds = pipeline.load_digits_dataset()
    assert ds.samples.shape[1] == 64
    assert ds.shape == (1, 8, 8)
    assert ds.samples.min() >= 0.0 and ds.samples.max() <= 1.0
    assert ds.labels is not None and ds.labels.shape[0] == ds.samples.shape[0]


def test_awgn_point_improves(model_image, digits):
    images = digits.samples[:64]
    res = pipeline.awgn_point(model_image, images, 10.0, SCHED, make_rng(0))
    assert res["delta_psnr_db"] > 0
    assert res["psnr_db"] > 10.0


def test_steps_ablation_layout(model_image, digits):
    images = digits.samples[:16]
    rows = pipeline.steps_ablation(model_image, images, 10.0, SCHED,
                                   rng_factory=lambda: make_rng(3),
                                   steps_list=[2, 10], timing_reps=1)
    assert [r["steps"] for r in rows] == [2, 10]
    for r in rows:
        assert r["seconds_per_sample"] > 0
    # identical channel noise per step count, so quality should not collapse
    assert rows[1]["psnr_db"] >= rows[0]["psnr_db"] - 0.5
