"""Baseline re-balancing strategies and the shared training loop."""

from .sampling import (
    class_balanced_batch,
    smote_interpolate,
    smote_oversample,
    smote_sample,
    uniform_batches,
)
from .strategy import EpochPlan, StrategySpec, apply_strategy
from .trainer import TrainConfig, TrainResult, train_classifier
from .weights import cbrw_weights, effective_numbers, rw_weights

__all__ = [
    "class_balanced_batch",
    "uniform_batches",
    "smote_interpolate",
    "smote_sample",
    "smote_oversample",
    "StrategySpec",
    "EpochPlan",
    "apply_strategy",
    "TrainConfig",
    "TrainResult",
    "train_classifier",
    "rw_weights",
    "cbrw_weights",
    "effective_numbers",
]
