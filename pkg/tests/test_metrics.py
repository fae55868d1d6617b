import math

import numpy as np
import pytest

from lttflow import delta_psnr, mse, psnr
from lttflow.metrics import report


def test_mse_basic():
    assert mse([0.0, 0.0], [1.0, 1.0]) == 1.0
    assert mse(np.zeros((2, 2)), np.zeros(4)) == 0.0


def test_mse_length_mismatch():
    with pytest.raises(ValueError):
        mse([1.0], [1.0, 2.0])


def test_psnr_known_value():
    a = np.zeros(4)
    b = np.full(4, 0.1)
    assert psnr(a, b, peak=1.0) == pytest.approx(20.0)


def test_psnr_identical_is_inf():
    assert math.isinf(psnr([0.5], [0.5]))


def test_psnr_peak_validation():
    with pytest.raises(ValueError):
        psnr([0.0], [1.0], peak=0.0)


def test_delta_psnr_sign():
    clean = np.zeros(8)
    decoded = np.full(8, 0.01)
    received = np.full(8, 0.2)
    assert delta_psnr(clean, decoded, received) > 0
    assert delta_psnr(clean, received, decoded) < 0


def test_delta_psnr_cap():
    clean = np.zeros(4)
    decoded = clean.copy()  # inf PSNR
    received = np.full(4, 0.3)
    assert delta_psnr(clean, decoded, received) == 99.0


def test_delta_psnr_both_perfect():
    clean = np.ones(4)
    assert delta_psnr(clean, clean, clean) == 0.0


def test_report_fields():
    r = report(np.zeros(4), np.full(4, 0.1), np.full(4, 0.2))
    assert r.mse == pytest.approx(0.01)
    assert r.psnr_db == pytest.approx(20.0)
    assert r.delta_psnr_db == pytest.approx(psnr(np.zeros(4), np.full(4, 0.1))
                                            - psnr(np.zeros(4), np.full(4, 0.2)))
