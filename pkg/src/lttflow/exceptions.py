"""Exception types shared across the package."""


class CalibrationError(ValueError):
    """Effective channel noise exceeds the maximum noise level of the path."""


class NumericsError(FloatingPointError):
    """A non-finite value appeared during training or integration."""


class CheckpointFormatError(ValueError):
    """A checkpoint file is malformed or carries an unsupported version."""


class IdxFormatError(ValueError):
    """An IDX file is malformed (bad magic, truncated payload, bad dims)."""
