"""Data ingestion and result emission: IDX image files, synthetic sources,
box-average downsampling, and CSV output."""

import csv
import math
import struct
from dataclasses import dataclass

import numpy as np

from .exceptions import IdxFormatError
from .randomness import make_rng, standard_normal

IDX_MAGIC_IMAGES = 0x00000803
IDX_MAGIC_LABELS = 0x00000801


@dataclass
class Dataset:
    samples: np.ndarray  # (n, dim), float64
    shape: tuple         # (c, h, w) for images, (dim,) for synthetic
    name: str
    normalization: tuple = (0.0, 1.0)  # (offset, scale) applied to raw values
    labels: np.ndarray | None = None

    @property
    def signal_rms(self) -> float:
        """Per-real-dimension RMS amplitude; the reference for SNR and lam."""
        return float(np.sqrt(np.mean(self.samples**2)))

    @property
    def symbol_power(self) -> float:
        """Mean power per complex symbol after real->complex packing."""
        return 2.0 * self.signal_rms**2


def load_idx(images_path, labels_path=None) -> Dataset:
    """Parse an IDX image file (big-endian), scaling pixels by 1/255."""
    with open(images_path, "rb") as f:
        raw = f.read()
    if len(raw) < 4:
        raise IdxFormatError(f"{images_path}: truncated header at offset 0")
    (magic,) = struct.unpack(">I", raw[:4])
    if magic != IDX_MAGIC_IMAGES:
        raise IdxFormatError(f"{images_path}: bad magic {magic:#010x} at offset 0")
    if len(raw) < 16:
        raise IdxFormatError(f"{images_path}: truncated dimension header")
    n, h, w = struct.unpack(">III", raw[4:16])
    expected = 16 + n * h * w
    if len(raw) != expected:
        raise IdxFormatError(
            f"{images_path}: expected {expected} bytes, got {len(raw)}"
        )
    pixels = np.frombuffer(raw, dtype=np.uint8, offset=16).astype(float) / 255.0
    samples = pixels.reshape(n, h * w)

    labels = None
    if labels_path is not None:
        with open(labels_path, "rb") as f:
            lraw = f.read()
        if len(lraw) < 8:
            raise IdxFormatError(f"{labels_path}: truncated header at offset 0")
        lmagic, ln = struct.unpack(">II", lraw[:8])
        if lmagic != IDX_MAGIC_LABELS:
            raise IdxFormatError(f"{labels_path}: bad magic {lmagic:#010x} at offset 0")
        if len(lraw) != 8 + ln:
            raise IdxFormatError(
                f"{labels_path}: expected {8 + ln} bytes, got {len(lraw)}"
            )
        if ln != n:
            raise IdxFormatError(f"label count {ln} != image count {n}")
        labels = np.frombuffer(lraw, dtype=np.uint8, offset=8).copy()

    return Dataset(
        samples=samples,
        shape=(1, h, w),
        name=str(images_path),
        normalization=(0.0, 1.0 / 255.0),
        labels=labels,
    )


def write_idx(images_path, images, shape):
    """Write uint8 images (n, h*w) in IDX format; values must be in [0,255]."""
    images = np.asarray(images)
    _, h, w = shape
    n = images.shape[0]
    data = np.clip(np.rint(images), 0, 255).astype(np.uint8)
    with open(images_path, "wb") as f:
        f.write(struct.pack(">IIII", IDX_MAGIC_IMAGES, n, h, w))
        f.write(data.tobytes())


def downsample(ds: Dataset, factor: int) -> Dataset:
    """Box-average pooling of an image dataset by an integer factor."""
    if factor == 1:
        return ds
    c, h, w = ds.shape
    if h % factor or w % factor:
        raise ValueError(f"factor {factor} does not divide {h}x{w}")
    nh, nw = h // factor, w // factor
    imgs = ds.samples.reshape(-1, c, h, w)
    pooled = imgs.reshape(-1, c, nh, factor, nw, factor).mean(axis=(3, 5))
    return Dataset(
        samples=pooled.reshape(ds.samples.shape[0], c * nh * nw),
        shape=(c, nh, nw),
        name=f"{ds.name}@/{factor}",
        normalization=ds.normalization,
        labels=ds.labels,
    )


def synth_gaussian(dim, mu0, sigma0, n, seed) -> Dataset:
    """Isotropic Gaussian source N(mu0, sigma0^2 I), deterministic per seed."""
    rng = make_rng(seed)
    mu0 = np.broadcast_to(np.asarray(mu0, dtype=float), (dim,))
    samples = mu0 + sigma0 * standard_normal(rng, (n, dim))
    return Dataset(samples=samples, shape=(dim,), name=f"gaussian{dim}d")


def synth_gmm(dim, components, n, seed) -> Dataset:
    """Gaussian mixture source; components is a list of (mu, sigma[, weight])."""
    rng = make_rng(seed)
    mus, sigmas, weights = [], [], []
    for comp in components:
        mu, sigma = comp[0], comp[1]
        weight = comp[2] if len(comp) > 2 else 1.0
        mus.append(np.broadcast_to(np.asarray(mu, dtype=float), (dim,)))
        sigmas.append(float(sigma))
        weights.append(float(weight))
    weights = np.asarray(weights)
    weights = weights / weights.sum()
    which = rng.choice(len(components), size=n, p=weights)
    eps = standard_normal(rng, (n, dim))
    samples = np.stack([mus[i] + sigmas[i] * eps[j] for j, i in enumerate(which)])
    return Dataset(samples=samples, shape=(dim,), name=f"gmm{len(components)}x{dim}d")


def _fmt(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (np.floating,)):
        return _fmt(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def write_csv(path, header, rows):
    """UTF-8 CSV with LF line endings and round-trip float formatting."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_csv(path):
    """Read a CSV written by write_csv back into (header, rows of strings)."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        rows = list(reader)
    if not rows:
        return [], []
    return rows[0], rows[1:]
