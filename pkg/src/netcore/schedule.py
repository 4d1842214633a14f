"""Learning-rate schedule: linear warm-up followed by step decay."""

from dataclasses import dataclass


@dataclass(frozen=True)
class LrSchedule:
    """
    Per-epoch learning rate.

    During the first `warmup_epochs` epochs the rate ramps linearly towards
    `base_lr` (epoch e gets base_lr * (e + 1) / warmup_epochs). The ramp is
    sampled at the end of each epoch, so epoch 0 already trains at
    base_lr / warmup_epochs and the last warm-up epoch at base_lr. Afterwards the
    rate is base_lr multiplied by the factor of every step whose epoch has been
    reached, so steps ((160, 0.01), (180, 0.01)) reproduce the usual
    "decay by 100 at 160 and 180" recipe.
    """

    base_lr: float = 0.1
    warmup_epochs: int = 0
    steps: tuple = ()

    def __post_init__(self):
        if self.base_lr < 0:
            raise ValueError(f"base_lr must be non-negative, got {self.base_lr}")
        if self.warmup_epochs < 0:
            raise ValueError(f"warmup_epochs must be non-negative, got {self.warmup_epochs}")
        for epoch, factor in self.steps:
            if epoch < 0 or factor < 0:
                raise ValueError(f"Invalid decay step ({epoch}, {factor})")

    def rate(self, epoch: int) -> float:
        if epoch < self.warmup_epochs:
            return self.base_lr * (epoch + 1) / self.warmup_epochs
        lr = self.base_lr
        for step_epoch, factor in sorted(self.steps):
            if epoch >= step_epoch:
                lr *= factor
        return lr
