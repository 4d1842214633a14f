"""
M2m Over-sampling Package
=========================
Major-to-minor translation for class-imbalanced classification.

Modules:
    - config: M2mConfig (hyper-parameters and ablation switches)
    - generation: rejection rule, seed-class distribution, translate
    - oversample: batch-wise generation, offline balanced dataset, outcome log
    - training: pre-training g and the two-phase train_m2m
"""

from .config import M2mConfig
from .generation import (
    GenerationOutcome,
    GenerationStatus,
    acceptance_probabilities,
    decide,
    generation_loss,
    reject_probability,
    seed_class_distribution,
    translate,
    translate_many,
)
from .oversample import OutcomeLog, build_balanced_dataset, generate_for_batch, make_seed_pool
from .training import BatchGenerator, fit_m2m, pretrain_g, train_m2m

__all__ = [
    "M2mConfig",
    "GenerationOutcome",
    "GenerationStatus",
    "acceptance_probabilities",
    "decide",
    "generation_loss",
    "reject_probability",
    "seed_class_distribution",
    "translate",
    "translate_many",
    "OutcomeLog",
    "build_balanced_dataset",
    "generate_for_batch",
    "make_seed_pool",
    "BatchGenerator",
    "fit_m2m",
    "pretrain_g",
    "train_m2m",
]
