"""SGD with momentum and weight decay."""

from dataclasses import dataclass, field, replace

import numpy as np

from .network import DifferentiableNet, ShapeError

DEFAULT_MOMENTUM = 0.9


@dataclass(frozen=True)
class OptimizerState:
    """Momentum buffers plus the coefficients of the update rule."""

    velocities: tuple = field(default_factory=tuple)
    momentum: float = DEFAULT_MOMENTUM
    weight_decay: float = 0.0
    lr: float = 0.1

    @classmethod
    def for_network(cls, net: DifferentiableNet, **kwargs) -> "OptimizerState":
        """Fresh state with zero momentum buffers shaped like the network parameters."""
        velocities = tuple(np.zeros_like(p) for p in net.parameters())
        return cls(velocities=velocities, **kwargs)

    def with_lr(self, lr: float) -> "OptimizerState":
        return replace(self, lr=lr)


def sgd_step(net: DifferentiableNet, grads, state: OptimizerState) -> tuple:
    """
    One momentum SGD update.

        v <- momentum * v + grad + weight_decay * param
        param <- param - lr * v

    Args:
        net: Current network snapshot
        grads: Flat gradient list matching net.parameters()
        state: Optimizer state (an empty velocity tuple means fresh buffers)

    Returns:
        (new network, new optimizer state); inputs are left untouched
    """
    params = net.parameters()
    grads = list(grads)
    if len(grads) != len(params):
        raise ShapeError(f"Expected {len(params)} gradient arrays, got {len(grads)}")

    velocities = state.velocities or tuple(np.zeros_like(p) for p in params)
    if len(velocities) != len(params):
        raise ShapeError("Momentum buffers do not match the network parameters")

    new_params, new_velocities = [], []
    for param, grad, velocity in zip(params, grads, velocities, strict=True):
        if grad.shape != param.shape or velocity.shape != param.shape:
            raise ShapeError(f"Gradient {grad.shape} does not match parameter {param.shape}")
        v = state.momentum * velocity + grad + state.weight_decay * param
        new_velocities.append(v)
        new_params.append(param - state.lr * v)

    return net.with_parameters(new_params), replace(state, velocities=tuple(new_velocities))
