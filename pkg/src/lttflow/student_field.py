"""Trainable velocity field: a small MLP over (x, time features) with
explicit forward/backward passes, an Adam update, and a JSON checkpoint
format. No autograd framework; every gradient is written out by hand so it
can be checked against finite differences."""

import json
from dataclasses import dataclass, asdict

import numpy as np

from .exceptions import CheckpointFormatError, NumericsError
from .randomness import make_rng

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class FieldArchitecture:
    input_dim: int
    hidden_dims: tuple
    time_features: int = 4
    activation: str = "silu"

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(h) for h in self.hidden_dims))
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be positive, got {self.input_dim}")
        if len(self.hidden_dims) < 1 or any(h < 1 for h in self.hidden_dims):
            raise ValueError(f"need at least one positive hidden layer, got {self.hidden_dims}")
        if self.time_features < 1:
            raise ValueError(f"time_features must be positive, got {self.time_features}")
        if self.activation != "silu":
            raise ValueError(f"unsupported activation: {self.activation}")

    @property
    def feature_dim(self):
        # x, raw t, and sin/cos pairs at integer frequencies 1..K
        return self.input_dim + 1 + 2 * self.time_features


def _silu(z):
    s = 1.0 / (1.0 + np.exp(-z))
    return z * s, s


def _silu_grad(z, s):
    return s * (1.0 + z * (1.0 - s))


class VelocityField:
    """MLP velocity field v(x, t) with per-layer gradient and Adam buffers.

    Hidden layers use fan-in uniform init from the seeded stream; the final
    layer starts at zero so the untrained field is the zero field and
    decoding is initially the identity."""

    def __init__(self, arch: FieldArchitecture, seed=0):
        self.arch = arch
        rng = make_rng(seed)
        dims = [arch.feature_dim, *arch.hidden_dims, arch.input_dim]
        self.weights = []
        self.biases = []
        for i in range(len(dims) - 1):
            fan_in, fan_out = dims[i], dims[i + 1]
            if i == len(dims) - 2:
                w = np.zeros((fan_out, fan_in))
            else:
                bound = np.sqrt(6.0 / fan_in)
                w = rng.uniform(-bound, bound, size=(fan_out, fan_in))
            self.weights.append(w)
            self.biases.append(np.zeros(fan_out))
        self.grad_w = [np.zeros_like(w) for w in self.weights]
        self.grad_b = [np.zeros_like(b) for b in self.biases]
        self._adam_m_w = [np.zeros_like(w) for w in self.weights]
        self._adam_v_w = [np.zeros_like(w) for w in self.weights]
        self._adam_m_b = [np.zeros_like(b) for b in self.biases]
        self._adam_v_b = [np.zeros_like(b) for b in self.biases]
        self._adam_t = 0

    # ---- features ----

    def _features(self, x, t):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if x.shape[1] != self.arch.input_dim:
            raise ValueError(
                f"expected input dim {self.arch.input_dim}, got {x.shape[1]}"
            )
        if t.shape[0] == 1 and x.shape[0] > 1:
            t = np.full(x.shape[0], t[0])
        k = np.arange(1, self.arch.time_features + 1)
        ang = 2.0 * np.pi * t[:, None] * k[None, :]
        return np.concatenate([x, t[:, None], np.sin(ang), np.cos(ang)], axis=1)

    # ---- forward / backward ----

    def _forward_cached(self, feats):
        acts = [feats]
        pre = []
        h = feats
        n_layers = len(self.weights)
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w.T + b
            pre.append(z)
            if i < n_layers - 1:
                h, s = _silu(z)
                acts.append(h)
            else:
                h = z
        return h, pre, acts

    def forward_batch(self, x, t):
        out, _, _ = self._forward_cached(self._features(x, t))
        if not np.all(np.isfinite(out)):
            raise NumericsError("non-finite output from velocity field")
        return out

    def forward(self, x, t):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        out = self.forward_batch(x, t)
        return out[0] if single else out

    def __call__(self, x, t):
        return self.forward(x, t)

    def backward_batch(self, x, t, targets, weight=1.0):
        """Accumulate weight * sum_i d||v(x_i,t_i) - u_i||^2 / dtheta into the
        gradient buffers; returns the per-sample squared-error losses."""
        targets = np.atleast_2d(np.asarray(targets, dtype=float))
        feats = self._features(x, t)
        out, pre, acts = self._forward_cached(feats)
        if out.shape != targets.shape:
            raise ValueError(f"target shape {targets.shape} != output {out.shape}")
        diff = out - targets
        losses = np.sum(diff * diff, axis=1)
        delta = 2.0 * weight * diff
        n_layers = len(self.weights)
        for i in range(n_layers - 1, -1, -1):
            gw = delta.T @ acts[i]
            gb = delta.sum(axis=0)
            if not (np.all(np.isfinite(gw)) and np.all(np.isfinite(gb))):
                raise NumericsError(f"non-finite gradient in layer {i}")
            self.grad_w[i] += gw
            self.grad_b[i] += gb
            if i > 0:
                back = delta @ self.weights[i]
                z = pre[i - 1]
                s = 1.0 / (1.0 + np.exp(-z))
                delta = back * _silu_grad(z, s)
        return losses

    def backward(self, x, t, target):
        """Single-sample gradient accumulation; returns the sample loss."""
        return float(self.backward_batch(np.atleast_2d(x), t, np.atleast_2d(target))[0])

    def zero_grad(self):
        for g in self.grad_w:
            g[:] = 0.0
        for g in self.grad_b:
            g[:] = 0.0

    def adam_step(self, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        """Standard bias-corrected Adam update; clears the gradient buffers."""
        self._adam_t += 1
        c1 = 1.0 - beta1**self._adam_t
        c2 = 1.0 - beta2**self._adam_t
        for i in range(len(self.weights)):
            for p, g, m, v in (
                (self.weights[i], self.grad_w[i], self._adam_m_w[i], self._adam_v_w[i]),
                (self.biases[i], self.grad_b[i], self._adam_m_b[i], self._adam_v_b[i]),
            ):
                m[:] = beta1 * m + (1.0 - beta1) * g
                v[:] = beta2 * v + (1.0 - beta2) * g * g
                p -= lr * (m / c1) / (np.sqrt(v / c2) + eps)
        self.zero_grad()

    # ---- parameter access (used by tests and checkpoints) ----

    def parameters(self):
        for i in range(len(self.weights)):
            yield ("w", i, self.weights[i])
            yield ("b", i, self.biases[i])

    def num_params(self):
        return sum(p.size for _, _, p in self.parameters())


def save_checkpoint(model: VelocityField, path):
    layers = [
        {"w": w.tolist(), "b": b.tolist()}
        for w, b in zip(model.weights, model.biases)
    ]
    doc = {
        "version": CHECKPOINT_VERSION,
        "architecture": asdict(model.arch),
        "layers": layers,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)


def load_checkpoint(path) -> VelocityField:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise CheckpointFormatError(f"malformed checkpoint {path}: {e}") from e
    for key in ("version", "architecture", "layers"):
        if key not in doc:
            raise CheckpointFormatError(f"checkpoint {path} missing field '{key}'")
    if doc["version"] != CHECKPOINT_VERSION:
        raise CheckpointFormatError(
            f"checkpoint version {doc['version']} unsupported (expected {CHECKPOINT_VERSION})"
        )
    arch_doc = dict(doc["architecture"])
    try:
        arch = FieldArchitecture(
            input_dim=arch_doc["input_dim"],
            hidden_dims=tuple(arch_doc["hidden_dims"]),
            time_features=arch_doc.get("time_features", 4),
            activation=arch_doc.get("activation", "silu"),
        )
    except KeyError as e:
        raise CheckpointFormatError(f"checkpoint {path} missing architecture field {e}") from e
    model = VelocityField(arch, seed=0)
    if len(doc["layers"]) != len(model.weights):
        raise CheckpointFormatError(
            f"checkpoint {path} has {len(doc['layers'])} layers, expected {len(model.weights)}"
        )
    for i, layer in enumerate(doc["layers"]):
        w = np.asarray(layer["w"], dtype=float)
        b = np.asarray(layer["b"], dtype=float)
        if w.shape != model.weights[i].shape or b.shape != model.biases[i].shape:
            raise CheckpointFormatError(
                f"layer {i} shape mismatch: got {w.shape}/{b.shape}, "
                f"expected {model.weights[i].shape}/{model.biases[i].shape}"
            )
        model.weights[i] = w
        model.biases[i] = b
    return model
