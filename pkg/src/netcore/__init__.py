"""
Minimal Differentiable-Network Engine
=====================================
Dense classifiers, cross-entropy, parameter and input gradients, momentum SGD
and learning-rate schedules, all in float64 numpy.

Modules:
    - network: DenseLayer, DifferentiableNet (forward / backward)
    - loss: cross_entropy, loss_and_gradients, input_gradient
    - optim: OptimizerState, sgd_step
    - schedule: LrSchedule
    - checkpoint: bit-exact binary save/load
    - rng: seed_sequence for reproducible child streams
"""

from .checkpoint import dumps_checkpoint, load_checkpoint, loads_checkpoint, save_checkpoint
from .loss import cross_entropy, input_gradient, loss_and_gradients, per_sample_cross_entropy
from .network import DenseLayer, DifferentiableNet, ShapeError, forward
from .optim import OptimizerState, sgd_step
from .rng import seed_sequence
from .schedule import LrSchedule

__all__ = [
    "DenseLayer",
    "DifferentiableNet",
    "ShapeError",
    "forward",
    "cross_entropy",
    "per_sample_cross_entropy",
    "loss_and_gradients",
    "input_gradient",
    "OptimizerState",
    "sgd_step",
    "LrSchedule",
    "seed_sequence",
    "save_checkpoint",
    "load_checkpoint",
    "dumps_checkpoint",
    "loads_checkpoint",
]
