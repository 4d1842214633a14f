"""Re-balancing strategy selection and deferred scheduling."""

from dataclasses import dataclass

import numpy as np

from .weights import DEFAULT_CBRW_BETA, cbrw_weights, rw_weights

STRATEGY_KINDS = ("erm", "rs", "smote", "rw", "cbrw", "m2m")
DEFERRABLE = ("rs", "rw", "cbrw", "m2m")

# Display names as they appear in result tables: (plain, deferred)
_LABELS = {
    "erm": ("ERM", "ERM"),
    "rs": ("RS", "DRS"),
    "smote": ("SMOTE", "SMOTE"),
    "rw": ("RW", "DRW"),
    "cbrw": ("CB-RW", "CB-DRW"),
    "m2m": ("M2m-RS", "M2m"),
}


@dataclass(frozen=True)
class StrategySpec:
    """Which re-balancing method to train with, and when it switches on."""

    kind: str = "erm"
    deferred: bool = False
    defer_epoch: int | None = None
    cbrw_beta: float = DEFAULT_CBRW_BETA
    smote_neighbors: int = 5
    name: str | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"Unknown strategy '{self.kind}', expected one of {STRATEGY_KINDS}")
        if self.deferred and self.kind not in DEFERRABLE:
            raise ValueError(f"Strategy '{self.kind}' cannot be deferred")
        if not 0 <= self.cbrw_beta < 1:
            raise ValueError(f"cbrw_beta must lie in [0, 1), got {self.cbrw_beta}")
        if self.smote_neighbors < 1:
            raise ValueError(f"smote_neighbors must be >= 1, got {self.smote_neighbors}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        plain, deferred = _LABELS[self.kind]
        return deferred if self.deferred else plain

    def validate_epochs(self, epochs: int, defer_epoch: int):
        if self.deferred and not 0 <= defer_epoch < epochs:
            raise ValueError(f"defer_epoch {defer_epoch} must lie in [0, {epochs})")


@dataclass(frozen=True)
class EpochPlan:
    """What one epoch of training looks like."""

    sampler: str  # "uniform" or "balanced"
    class_weights: np.ndarray | None = None
    generate: bool = False


ERM_PLAN = EpochPlan("uniform")


def apply_strategy(epoch: int, spec: StrategySpec, class_counts, defer_epoch: int) -> EpochPlan:
    """
    Sampler and loss weights for this epoch.

    A deferred strategy trains with plain ERM until `defer_epoch` and switches
    to its own behaviour from that epoch on. SMOTE trains uniformly on the
    pre-augmented set, so it looks like ERM here.
    """
    if spec.kind in ("erm", "smote"):
        return ERM_PLAN
    if spec.deferred and epoch < defer_epoch:
        return ERM_PLAN
    if spec.kind == "rs":
        return EpochPlan("balanced")
    if spec.kind == "rw":
        return EpochPlan("uniform", class_weights=rw_weights(class_counts))
    if spec.kind == "cbrw":
        return EpochPlan("uniform", class_weights=cbrw_weights(class_counts, spec.cbrw_beta))
    return EpochPlan("balanced", generate=True)
