"""
Dense Network Engine
====================
Feed-forward classifiers with hand-written backpropagation.

A network is an ordered list of dense layers. Every hidden layer uses a ReLU,
the final layer is an identity map producing K logits. The engine supports
gradients with respect to both the parameters and the inputs, which is all the
translation step needs.

Usage:
    from netcore import DifferentiableNet

    net = DifferentiableNet.initialize(16, [64, 64], 10, seed=0)
    logits = net.forward(batch)
"""

from dataclasses import dataclass

import numpy as np

ACTIVATIONS = ("relu", "identity")


class ShapeError(ValueError):
    """Raised when an array does not match the shape a network expects."""


@dataclass(frozen=True)
class DenseLayer:
    """A single affine layer followed by an activation tag."""

    weight: np.ndarray  # (in, out)
    bias: np.ndarray  # (out,)
    activation: str = "relu"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"Unknown activation '{self.activation}'")
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[1],):
            raise ShapeError(
                f"Layer weight {self.weight.shape} and bias {self.bias.shape} do not chain"
            )

    @property
    def fan_in(self) -> int:
        return self.weight.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weight.shape[1]


@dataclass(frozen=True)
class ForwardCache:
    """Per-layer inputs and pre-activations kept for the backward pass."""

    inputs: list
    pre_activations: list


class DifferentiableNet:
    """
    Immutable snapshot of a dense classifier f: R^d -> R^K.

    Optimizer steps return a new instance, so a network handed to an
    evaluation thread never changes underneath it.
    """

    def __init__(self, layers):
        layers = list(layers)
        if not layers:
            raise ShapeError("A network needs at least one layer")
        for prev, nxt in zip(layers, layers[1:], strict=False):
            if prev.fan_out != nxt.fan_in:
                raise ShapeError(f"Layer widths do not chain: {prev.fan_out} -> {nxt.fan_in}")
        self.layers = tuple(layers)

    @classmethod
    def initialize(cls, input_dim: int, hidden, num_classes: int, seed=0) -> "DifferentiableNet":
        """
        Build a ReLU network with uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights.

        Args:
            input_dim: Input dimension d
            hidden: Hidden layer widths, e.g. [64, 64]; empty for a linear model
            num_classes: Number of logits K
            seed: int, SeedSequence or Generator

        Returns:
            A freshly initialised network
        """
        rng = np.random.default_rng(seed)
        widths = [input_dim, *hidden, num_classes]
        layers = []
        for i, (fan_in, fan_out) in enumerate(zip(widths, widths[1:], strict=False)):
            bound = 1.0 / np.sqrt(fan_in)
            weight = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            bias = rng.uniform(-bound, bound, size=fan_out)
            activation = "identity" if i == len(widths) - 2 else "relu"
            layers.append(DenseLayer(weight, bias, activation))
        return cls(layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].fan_in

    @property
    def num_classes(self) -> int:
        return self.layers[-1].fan_out

    def parameters(self) -> list:
        """Flat parameter list: [W0, b0, W1, b1, ...]."""
        params = []
        for layer in self.layers:
            params.extend([layer.weight, layer.bias])
        return params

    def with_parameters(self, params) -> "DifferentiableNet":
        """Return a copy of this network carrying the given flat parameter list."""
        params = list(params)
        if len(params) != 2 * len(self.layers):
            raise ShapeError(f"Expected {2 * len(self.layers)} arrays, got {len(params)}")
        layers = []
        for i, layer in enumerate(self.layers):
            weight, bias = params[2 * i], params[2 * i + 1]
            if weight.shape != layer.weight.shape or bias.shape != layer.bias.shape:
                raise ShapeError(f"Parameter shapes for layer {i} do not match")
            layers.append(DenseLayer(weight, bias, layer.activation))
        return DifferentiableNet(layers)

    def _check_batch(self, batch) -> np.ndarray:
        batch = np.asarray(batch, dtype=np.float64)
        if batch.ndim != 2 or batch.shape[1] != self.input_dim:
            raise ShapeError(f"Expected a batch of shape (m, {self.input_dim}), got {batch.shape}")
        if not np.all(np.isfinite(batch)):
            raise ValueError("Batch contains non-finite entries")
        return batch

    def forward_with_cache(self, batch) -> tuple:
        """Forward pass keeping what backward() needs."""
        a = self._check_batch(batch)
        inputs, pre = [], []
        for layer in self.layers:
            inputs.append(a)
            z = a @ layer.weight + layer.bias
            pre.append(z)
            a = np.maximum(z, 0.0) if layer.activation == "relu" else z
        return a, ForwardCache(inputs, pre)

    def forward(self, batch) -> np.ndarray:
        """Logits of shape (m, K) for a batch of shape (m, d)."""
        logits, _ = self.forward_with_cache(batch)
        return logits

    def backward(self, cache: ForwardCache, grad_logits, need_params: bool = True) -> tuple:
        """
        Backpropagate a gradient with respect to the logits.

        Args:
            cache: ForwardCache from forward_with_cache()
            grad_logits: dObjective/dlogits, shape (m, K)
            need_params: Skip parameter gradients when only the input gradient matters

        Returns:
            (flat parameter gradient list or None, input gradient of shape (m, d))
        """
        grad = np.asarray(grad_logits, dtype=np.float64)
        param_grads = [None] * (2 * len(self.layers))
        for i in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[i]
            if layer.activation == "relu":
                grad = grad * (cache.pre_activations[i] > 0)
            if need_params:
                param_grads[2 * i] = cache.inputs[i].T @ grad
                param_grads[2 * i + 1] = grad.sum(axis=0)
            grad = grad @ layer.weight.T
        return (param_grads if need_params else None), grad

    def copy(self) -> "DifferentiableNet":
        return self.with_parameters([p.copy() for p in self.parameters()])

    def __repr__(self):
        widths = [self.input_dim] + [layer.fan_out for layer in self.layers]
        return f"DifferentiableNet(widths={widths})"


def forward(net: DifferentiableNet, batch) -> np.ndarray:
    """Module-level alias of DifferentiableNet.forward."""
    return net.forward(batch)
