import numpy as np

from lttflow.randomness import complex_normal, make_rng, spawn_rngs, standard_normal


def test_determinism():
    a = standard_normal(make_rng(5), (100,))
    b = standard_normal(make_rng(5), (100,))
    assert np.array_equal(a, b)


def test_moments():
    z = standard_normal(make_rng(0), (200000,))
    assert abs(z.mean()) < 0.01
    assert abs(z.var() - 1.0) < 0.01


def test_shapes():
    assert standard_normal(make_rng(1), 7).shape == (7,)
    assert standard_normal(make_rng(1), (3, 4)).shape == (3, 4)


def test_complex_normal_unit_variance():
    z = complex_normal(make_rng(2), 200000)
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.01
    assert abs(z.real.var() - 0.5) < 0.01
    assert abs(z.imag.var() - 0.5) < 0.01


def test_spawned_streams_differ():
    r1, r2 = spawn_rngs(3, 2)
    a = standard_normal(r1, 50)
    b = standard_normal(r2, 50)
    assert not np.allclose(a, b)
    # same seed, same spawn: reproducible
    r1b, _ = spawn_rngs(3, 2)
    assert np.array_equal(a, standard_normal(r1b, 50))
