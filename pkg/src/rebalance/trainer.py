"""
Strategy-aware Training Loop
============================
The single SGD loop every strategy (ERM, RS, SMOTE, RW, CB-RW, M2m) runs through.

Random streams are split up front: network initialisation, batch sampling,
SMOTE augmentation and the batch hook each get their own child of the master
seed. A hook that never changes a batch therefore leaves training bit-identical
to the same strategy without the hook.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from longtail import LabeledDataset
from netcore import (
    DifferentiableNet,
    LrSchedule,
    OptimizerState,
    loss_and_gradients,
    seed_sequence,
    sgd_step,
)

from .sampling import class_balanced_batch, smote_oversample, uniform_batches
from .strategy import StrategySpec, apply_strategy

logger = logging.getLogger(__name__)

# Child stream keys under the master seed
INIT_STREAM, SAMPLE_STREAM, HOOK_STREAM, SMOTE_STREAM = range(4)


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer, schedule and deferral settings shared by every strategy."""

    epochs: int = 40
    batch_size: int = 64
    lr: float = 0.1
    warmup_epochs: int = 5
    lr_steps: tuple = ()
    momentum: float = 0.9
    weight_decay: float = 2e-4
    defer_epoch: int | None = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        object.__setattr__(self, "lr_steps", tuple(tuple(step) for step in self.lr_steps))

    def schedule(self) -> LrSchedule:
        return LrSchedule(self.lr, self.warmup_epochs, self.lr_steps)

    def resolved_defer_epoch(self, spec: StrategySpec | None = None) -> int:
        """Strategy override, then config value, then 80% of training."""
        if spec is not None and spec.defer_epoch is not None:
            return spec.defer_epoch
        if self.defer_epoch is not None:
            return self.defer_epoch
        return int(0.8 * self.epochs)


@dataclass
class TrainResult:
    net: DifferentiableNet
    history: list = field(default_factory=list)


def train_classifier(
    train: LabeledDataset,
    spec: StrategySpec,
    config: TrainConfig,
    hidden=(64, 64),
    seed=0,
    batch_hook=None,
    net: DifferentiableNet | None = None,
) -> TrainResult:
    """
    Train a classifier on `train` with the given strategy.

    Args:
        train: Long-tailed training split
        spec: Strategy to apply
        config: Optimizer / schedule settings
        hidden: Hidden layer widths for a freshly initialised network
        seed: Master seed (int or SeedSequence)
        batch_hook: Optional callable (net, x, y, seed) -> (x, y), invoked on
            every batch of epochs whose plan asks for generation
        net: Start from this network instead of a fresh one

    Returns:
        TrainResult with the final network and per-epoch mean loss
    """
    defer_epoch = config.resolved_defer_epoch(spec)
    spec.validate_epochs(config.epochs, defer_epoch)

    if net is None:
        net = DifferentiableNet.initialize(
            train.dim, hidden, train.num_classes, seed_sequence(seed, INIT_STREAM)
        )
    if spec.kind == "smote":
        train = smote_oversample(train, spec.smote_neighbors, seed_sequence(seed, SMOTE_STREAM))
        logger.debug("SMOTE grew the training set to %d samples", len(train))

    rng = np.random.default_rng(seed_sequence(seed, SAMPLE_STREAM))
    state = OptimizerState.for_network(
        net, momentum=config.momentum, weight_decay=config.weight_decay
    )
    schedule = config.schedule()
    batches_per_epoch = math.ceil(len(train) / config.batch_size)
    history = []

    for epoch in range(config.epochs):
        plan = apply_strategy(epoch, spec, train.class_counts, defer_epoch)
        state = state.with_lr(schedule.rate(epoch))

        if plan.sampler == "balanced":
            batches = (
                class_balanced_batch(train, config.batch_size, rng)
                for _ in range(batches_per_epoch)
            )
        else:
            batches = uniform_batches(train, config.batch_size, rng)

        losses = []
        for index, (x, y) in enumerate(batches):
            if plan.generate and batch_hook is not None:
                x, y = batch_hook(net, x, y, seed_sequence(seed, HOOK_STREAM, epoch, index))
            weights = plan.class_weights[y] if plan.class_weights is not None else None
            loss, grads = loss_and_gradients(net, x, y, weights)
            net, state = sgd_step(net, grads, state)
            losses.append(loss)

        history.append(float(np.mean(losses)))
        logger.debug(
            "%s epoch %d/%d lr=%.4g loss=%.4f",
            spec.label,
            epoch + 1,
            config.epochs,
            state.lr,
            history[-1],
        )

    return TrainResult(net, history)
