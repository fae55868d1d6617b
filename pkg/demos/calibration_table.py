"""Landing-time calibration table.

Walks the SNR grid and prints, per point, the channel noise level and the
landing time on the Gaussian path in both time conventions. This is the
entire channel-awareness of the decoder: one inverse schedule evaluation.
"""

import numpy as np

from lttflow import NoiseSchedule
from lttflow.pipeline import calibrate_table

sched = NoiseSchedule(sigma_max=1.0)
signal_rms = 0.463

print(f"schedule: linear, sigma_max={sched.sigma_max}")
print(f"signal RMS: {signal_rms}")
print()
print(f"{'SNR (dB)':>8}  {'sigma_ch':>9}  {'t*':>7}  {'1-t*':>7}  status")
for snr, sigma_ch, t_main, t_rev, status in calibrate_table(
        [0, 3, 5, 7, 10, 12, 15], signal_rms, sched):
    if status == "ok":
        print(f"{snr:>8}  {sigma_ch:>9.4f}  {t_main:>7.4f}  {t_rev:>7.4f}  {status}")
    else:
        print(f"{snr:>8}  {sigma_ch:>9.4f}  {'-':>7}  {'-':>7}  {status}")

print()
print("lower SNR -> larger sigma_ch -> earlier landing (more transport work)")

# the whole grid stays inside the path as long as sigma_ch <= sigma_max
worst = calibrate_table([-1.0], signal_rms, sched)[0]
print(f"at SNR=-1 dB: sigma_ch={worst[1]:.4f}, still {worst[4]}")
