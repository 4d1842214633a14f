"""
Synthetic Generators
====================
Class-balanced toy datasets used in place of image benchmarks.

All generators return a LabeledDataset with `per_class` samples in every class
and are deterministic for a given seed.
"""

import numpy as np
from sklearn.datasets import make_circles, make_moons

from .dataset import LabeledDataset

LAYOUTS = ("circle", "simplex")


def gaussian_mixture(
    num_classes: int,
    per_class: int,
    dim: int,
    separation: float,
    seed=0,
    layout: str = "circle",
):
    """
    Isotropic unit-variance Gaussians with means on a circle or a simplex.

    With the circle layout class k has mean
    separation * (cos(2*pi*k/K), sin(2*pi*k/K), 0, ..., 0), so for K=2 the means
    are +-(separation, 0, ...). Neighbouring classes get closer as K grows.

    With the simplex layout class k has mean separation * e_k, so every pair of
    classes is separation * sqrt(2) apart whatever K is. Needs dim >= K.
    """
    if num_classes < 2:
        raise ValueError(f"gaussian_mixture needs at least 2 classes, got {num_classes}")
    if dim < 2:
        raise ValueError(f"gaussian_mixture needs dim >= 2, got {dim}")
    if layout not in LAYOUTS:
        raise ValueError(f"Unknown layout '{layout}', expected one of {LAYOUTS}")
    if layout == "simplex" and dim < num_classes:
        raise ValueError(f"simplex layout needs dim >= num_classes, got {dim} < {num_classes}")

    rng = np.random.default_rng(seed)
    means = np.zeros((num_classes, dim))
    if layout == "simplex":
        means[:, :num_classes] = separation * np.eye(num_classes)
    else:
        angles = 2.0 * np.pi * np.arange(num_classes) / num_classes
        means[:, 0] = separation * np.cos(angles)
        means[:, 1] = separation * np.sin(angles)

    labels = np.repeat(np.arange(num_classes), per_class)
    inputs = means[labels] + rng.standard_normal((labels.size, dim))
    return LabeledDataset(inputs, labels, num_classes)


def _pad(inputs: np.ndarray, extra_dims: int, seed) -> np.ndarray:
    if extra_dims <= 0:
        return inputs
    rng = np.random.default_rng(seed)
    return np.hstack([inputs, rng.standard_normal((inputs.shape[0], extra_dims))])


def two_moons(per_class: int, noise: float = 0.1, extra_dims: int = 0, seed: int = 0):
    """Two interleaved crescents, optionally padded with pure-noise dimensions."""
    inputs, labels = make_moons(n_samples=(per_class, per_class), noise=noise, random_state=seed)
    return LabeledDataset(_pad(inputs, extra_dims, seed), labels, 2)


def concentric_rings(
    per_class: int, noise: float = 0.05, factor: float = 0.5, extra_dims: int = 0, seed: int = 0
):
    """Outer ring is class 0, inner ring class 1."""
    inputs, labels = make_circles(
        n_samples=(per_class, per_class), noise=noise, factor=factor, random_state=seed
    )
    return LabeledDataset(_pad(inputs, extra_dims, seed), labels, 2)
