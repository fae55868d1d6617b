"""Flow-matching generative decoding for wireless transmission.

A channel observation is interpreted as a point on a Gaussian smoothing
path at a landing time set by the (effective) noise level; a trained
velocity field then transports it deterministically to the clean data
distribution. MMSE/SVD front-ends reduce Rayleigh and MIMO channels to the
same AWGN path.
"""

from .schedule import NoiseSchedule, ScheduleKind
from .flow_path import (
    PathSample,
    sample_path,
    teacher_velocity,
    continuity_residual,
    marginal_field_gaussian,
)
from .scalar_bench import (
    ScalarModel,
    ltt_gain,
    mmse_gain,
    mse_of_gain,
    excess_mse,
    exact_scalar_decode,
    scalar_field,
)
from .student_field import (
    FieldArchitecture,
    VelocityField,
    save_checkpoint,
    load_checkpoint,
)
from .cfm_trainer import TrainConfig, cfm_batch_loss, train
from .ode_decoder import (
    DecodeConfig,
    integrate,
    integrate_staged,
    decode_awgn,
    convergence_profile,
)
from .channel import (
    ChannelReport,
    pack_complex,
    unpack_complex,
    awgn,
    rayleigh_equalize,
    complex_svd_2x2,
    mimo_equalize,
    mimo_decode,
)
from .metrics import MetricReport, mse, psnr, delta_psnr
from .data_io import (
    Dataset,
    load_idx,
    write_idx,
    downsample,
    synth_gaussian,
    synth_gmm,
    write_csv,
    read_csv,
)
from .exceptions import (
    CalibrationError,
    NumericsError,
    CheckpointFormatError,
    IdxFormatError,
)

__version__ = "0.1.0"

__all__ = [
    "NoiseSchedule", "ScheduleKind",
    "PathSample", "sample_path", "teacher_velocity", "continuity_residual",
    "marginal_field_gaussian",
    "ScalarModel", "ltt_gain", "mmse_gain", "mse_of_gain", "excess_mse",
    "exact_scalar_decode", "scalar_field",
    "FieldArchitecture", "VelocityField", "save_checkpoint", "load_checkpoint",
    "TrainConfig", "cfm_batch_loss", "train",
    "DecodeConfig", "integrate", "integrate_staged", "decode_awgn",
    "convergence_profile",
    "ChannelReport", "pack_complex", "unpack_complex", "awgn",
    "rayleigh_equalize", "complex_svd_2x2", "mimo_equalize", "mimo_decode",
    "MetricReport", "mse", "psnr", "delta_psnr",
    "Dataset", "load_idx", "write_idx", "downsample", "synth_gaussian",
    "synth_gmm", "write_csv", "read_csv",
    "CalibrationError", "NumericsError", "CheckpointFormatError",
    "IdxFormatError",
    "__version__",
]
