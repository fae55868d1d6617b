import numpy as np
import pytest

from lttflow import (
    CheckpointFormatError,
    FieldArchitecture,
    VelocityField,
    load_checkpoint,
    save_checkpoint,
)
from lttflow.randomness import make_rng, standard_normal


def small_field(seed=0):
    arch = FieldArchitecture(input_dim=2, hidden_dims=(3,), time_features=1)
    model = VelocityField(arch, seed=seed)
    rng = make_rng(100 + seed)
    for w in model.weights:
        w += 0.3 * standard_normal(rng, w.shape)
    for b in model.biases:
        b += 0.3 * standard_normal(rng, b.shape)
    return model


def test_zero_init_final_layer():
    model = VelocityField(FieldArchitecture(input_dim=4, hidden_dims=(8, 8)), seed=1)
    x = standard_normal(make_rng(0), 4)
    assert np.allclose(model(x, 0.3), 0.0)


def test_feature_dim():
    arch = FieldArchitecture(input_dim=5, hidden_dims=(7,), time_features=4)
    assert arch.feature_dim == 5 + 1 + 8


def test_forward_batch_shapes():
    model = small_field()
    out = model.forward_batch(np.zeros((6, 2)), np.linspace(0, 1, 6))
    assert out.shape == (6, 2)
    single = model(np.zeros(2), 0.5)
    assert single.shape == (2,)


def test_gradients_match_finite_differences():
    model = small_field(seed=3)
    rng = make_rng(9)
    x = standard_normal(rng, (4, 2))
    t = rng.random(4)
    targets = standard_normal(rng, (4, 2))

    model.zero_grad()
    model.backward_batch(x, t, targets, weight=0.25)
    analytic = [g.copy() for g in model.grad_w] + [g.copy() for g in model.grad_b]

    def loss():
        out = model.forward_batch(x, t)
        return 0.25 * float(np.sum((out - targets) ** 2))

    delta = 1e-5
    params = list(model.weights) + list(model.biases)
    worst = 0.0
    for p, g in zip(params, analytic):
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = p[idx]
            p[idx] = orig + delta
            lp = loss()
            p[idx] = orig - delta
            lm = loss()
            p[idx] = orig
            fd = (lp - lm) / (2.0 * delta)
            denom = max(abs(fd), abs(g[idx]), 1e-8)
            worst = max(worst, abs(fd - g[idx]) / denom)
    assert worst < 1e-4


def test_backward_accumulates():
    model = small_field(seed=4)
    x = np.ones((1, 2))
    tgt = np.zeros((1, 2))
    model.zero_grad()
    model.backward_batch(x, [0.5], tgt)
    once = [g.copy() for g in model.grad_w]
    model.backward_batch(x, [0.5], tgt)
    for g1, g2 in zip(once, model.grad_w):
        assert np.allclose(g2, 2.0 * g1)


def test_adam_reduces_loss():
    model = small_field(seed=5)
    rng = make_rng(12)
    x = standard_normal(rng, (32, 2))
    t = rng.random(32)
    tgt = -x

    def loss():
        return float(np.mean(np.sum((model.forward_batch(x, t) - tgt) ** 2, axis=1)))

    before = loss()
    for _ in range(200):
        model.zero_grad()
        model.backward_batch(x, t, tgt, weight=1.0 / 32)
        model.adam_step(lr=1e-2)
    assert loss() < 0.2 * before


def test_checkpoint_roundtrip(tmp_path):
    model = small_field(seed=6)
    path = tmp_path / "ck.json"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    x = standard_normal(make_rng(1), (3, 2))
    t = np.array([0.1, 0.5, 0.9])
    assert np.allclose(model.forward_batch(x, t), loaded.forward_batch(x, t))


def test_checkpoint_missing_field(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"version": 1, "layers": []}')
    with pytest.raises(CheckpointFormatError, match="architecture"):
        load_checkpoint(path)


def test_checkpoint_bad_version(tmp_path):
    model = small_field()
    path = tmp_path / "ck.json"
    save_checkpoint(model, path)
    import json

    doc = json.loads(path.read_text())
    doc["version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(CheckpointFormatError, match="version"):
        load_checkpoint(path)


def test_checkpoint_truncated(tmp_path):
    path = tmp_path / "trunc.json"
    path.write_text('{"version": 1, "arch')
    with pytest.raises(CheckpointFormatError):
        load_checkpoint(path)


def test_input_dim_checked():
    model = small_field()
    with pytest.raises(ValueError):
        model.forward_batch(np.zeros((2, 5)), np.zeros(2))


def test_architecture_validation():
    with pytest.raises(ValueError):
        FieldArchitecture(input_dim=0, hidden_dims=(4,))
    with pytest.raises(ValueError):
        FieldArchitecture(input_dim=2, hidden_dims=())
    with pytest.raises(ValueError):
        FieldArchitecture(input_dim=2, hidden_dims=(4,), activation="relu")
