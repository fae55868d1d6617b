"""Training loop: regress the student velocity field onto the analytic
conditional target along the Gaussian smoothing path."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NumericsError
from .randomness import spawn_rngs, standard_normal
from .schedule import NoiseSchedule
from .student_field import FieldArchitecture, VelocityField, save_checkpoint


@dataclass
class TrainConfig:
    epochs: int
    batch_size: int
    learning_rate: float = 1e-3
    seed: int = 0
    schedule: NoiseSchedule = field(default_factory=NoiseSchedule)
    dataset_ref: str = ""
    log_every: int = 100
    hidden_dims: tuple = (64, 64)
    time_features: int = 4
    checkpoint_path: str | None = None
    lr_final_fraction: float = 1.0  # cosine-decay floor as a fraction of learning_rate

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError(f"epochs must be nonnegative, got {self.epochs}")
        if self.batch_size < 1 or self.learning_rate <= 0 or self.log_every < 1:
            raise ValueError("batch_size, learning_rate, log_every must be positive")
        if not 0.0 < self.lr_final_fraction <= 1.0:
            raise ValueError(
                f"lr_final_fraction must be in (0, 1], got {self.lr_final_fraction}"
            )


def cfm_batch_loss(model: VelocityField, batch, sched: NoiseSchedule, rng) -> float:
    """One regression step on a batch of clean vectors.

    Draws t ~ U[0,1] and eps ~ N(0,I) per sample, forms the path state
    x_t = x1 + sigma(t) eps, and accumulates gradients of the mean over the
    batch of ||v(x_t, t) - sigma_dot(t) eps||^2.
    """
    batch = np.atleast_2d(np.asarray(batch, dtype=float))
    if batch.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    n = batch.shape[0]
    t = rng.random(n)
    eps = standard_normal(rng, batch.shape)
    sig = sched.sigma(t)
    x_t = batch + sig[:, None] * eps
    targets = sched.sigma_dot(t)[:, None] * eps
    losses = model.backward_batch(x_t, t, targets, weight=1.0 / n)
    loss = float(np.mean(losses))
    if not np.isfinite(loss):
        raise NumericsError(
            f"non-finite batch loss (t range [{t.min():.4g}, {t.max():.4g}], "
            f"sigma range [{sig.min():.4g}, {sig.max():.4g}], "
            f"state norm {np.linalg.norm(x_t):.4g})"
        )
    return loss


def train(config: TrainConfig, dataset):
    """Run the full training loop; returns (model, loss_history).

    loss_history is a list of (step, epoch, loss) tuples, one per step.
    Fully deterministic given (seed, config, dataset).
    """
    data = np.atleast_2d(np.asarray(dataset, dtype=float))
    if data.shape[0] == 0:
        raise ValueError("dataset must be nonempty")
    dim = data.shape[1]
    init_rng, shuffle_rng, path_rng = spawn_rngs(config.seed, 3)
    arch = FieldArchitecture(
        input_dim=dim,
        hidden_dims=config.hidden_dims,
        time_features=config.time_features,
    )
    model = VelocityField(arch, seed=int(init_rng.integers(2**63)))

    steps_per_epoch = -(-data.shape[0] // config.batch_size)
    total_steps = max(1, config.epochs * steps_per_epoch)
    lr_floor = config.learning_rate * config.lr_final_fraction

    history = []
    step = 0
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(data.shape[0])
        for start in range(0, data.shape[0], config.batch_size):
            batch = data[order[start : start + config.batch_size]]
            loss = cfm_batch_loss(model, batch, config.schedule, path_rng)
            frac = step / total_steps
            lr = lr_floor + 0.5 * (config.learning_rate - lr_floor) * (
                1.0 + np.cos(np.pi * frac)
            )
            model.adam_step(lr=lr)
            step += 1
            history.append((step, epoch, loss))
        if config.checkpoint_path is not None:
            save_checkpoint(model, config.checkpoint_path)
    if config.checkpoint_path is not None and config.epochs == 0:
        save_checkpoint(model, config.checkpoint_path)
    return model, history
