"""Seeded Gaussian draws via Box-Muller, reproducible across platforms."""

import numpy as np


def standard_normal(rng, size):
    """i.i.d. N(0,1) draws of the given shape from a numpy Generator.

    Uses Box-Muller on uniform deviates so the stream depends only on the
    Generator's uniform output, not on any ziggurat implementation detail.
    """
    shape = (size,) if np.isscalar(size) else tuple(size)
    n = int(np.prod(shape)) if shape else 1
    m = (n + 1) // 2
    u1 = rng.random(m)
    u2 = rng.random(m)
    # guard against log(0)
    u1 = np.maximum(u1, np.finfo(float).tiny)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])
    return z[:n].reshape(shape)


def complex_normal(rng, size):
    """i.i.d. CN(0,1) draws: real and imaginary parts each N(0, 1/2)."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    re = standard_normal(rng, shape)
    im = standard_normal(rng, shape)
    return (re + 1j * im) / np.sqrt(2.0)


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed, n):
    """n independent, reproducible substreams derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]
