"""
Mini-batch Samplers
===================
Uniform epochs, class-balanced re-sampling and SMOTE interpolation.

Usage:
    from rebalance.sampling import class_balanced_batch

    x, y = class_balanced_batch(train, 128, rng)
"""

import logging

import numpy as np
from sklearn.neighbors import NearestNeighbors

from longtail import DatasetError, LabeledDataset

logger = logging.getLogger(__name__)

DEFAULT_SMOTE_NEIGHBORS = 5


# ---------------------------------------------------------------------------
# Re-sampling
# ---------------------------------------------------------------------------


def uniform_batches(dataset: LabeledDataset, batch_size: int, seed=None):
    """One shuffled pass over the dataset in mini-batches (standard ERM sampling)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(dataset))
    for start in range(0, order.size, batch_size):
        idx = order[start : start + batch_size]
        yield dataset.inputs[idx], dataset.labels[idx]


def class_balanced_batch(dataset: LabeledDataset, batch_size: int, seed=None) -> tuple:
    """
    Draw a batch whose classes are uniform in expectation.

    Each slot picks a class uniformly, then a sample uniformly within that
    class, so minority samples repeat as often as needed.
    """
    rng = np.random.default_rng(seed)
    counts = dataset.class_counts
    if np.any(counts < 1):
        raise DatasetError("Cannot re-sample from an empty class")

    grouped = np.argsort(dataset.labels, kind="stable")
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])

    classes = rng.integers(dataset.num_classes, size=batch_size)
    sizes = counts[classes]
    within = np.minimum((rng.random(batch_size) * sizes).astype(np.int64), sizes - 1)
    idx = grouped[offsets[classes] + within]
    return dataset.inputs[idx], dataset.labels[idx]


# ---------------------------------------------------------------------------
# SMOTE
# ---------------------------------------------------------------------------


def smote_interpolate(x_a, x_b, u):
    """Point at fraction u along the segment from x_a to x_b."""
    x_a = np.asarray(x_a, dtype=np.float64)
    return x_a + u * (np.asarray(x_b, dtype=np.float64) - x_a)


def _class_neighbors(points: np.ndarray, k_neighbors: int) -> np.ndarray:
    """Indices of each point's k nearest same-class neighbours (self excluded)."""
    k = min(k_neighbors, points.shape[0] - 1)
    _, idx = NearestNeighbors(n_neighbors=k + 1).fit(points).kneighbors(points)
    return idx[:, 1:]


def _smote_draws(points: np.ndarray, count: int, k_neighbors: int, rng) -> np.ndarray:
    if points.shape[0] < 2:
        logger.warning("SMOTE on a single-sample class: falling back to duplication")
        return np.repeat(points[:1], count, axis=0)
    neighbors = _class_neighbors(points, k_neighbors)
    a = rng.integers(points.shape[0], size=count)
    b = neighbors[a, rng.integers(neighbors.shape[1], size=count)]
    u = rng.random(count)[:, None]
    return smote_interpolate(points[a], points[b], u)


def smote_sample(
    dataset: LabeledDataset, label: int, k_neighbors: int = DEFAULT_SMOTE_NEIGHBORS, seed=None
) -> tuple:
    """
    One synthetic sample of class `label`.

    A seed x_a is drawn from the class, x_b among its k nearest same-class
    neighbours (Euclidean), and the result is x_a + u * (x_b - x_a) with
    u ~ Uniform[0, 1]. A singleton class is duplicated instead.

    Returns:
        (x, label)
    """
    rng = np.random.default_rng(seed)
    points = dataset.inputs[dataset.indices_of(label)]
    return _smote_draws(points, 1, k_neighbors, rng)[0], label


def smote_oversample(
    dataset: LabeledDataset, k_neighbors: int = DEFAULT_SMOTE_NEIGHBORS, seed=None
) -> LabeledDataset:
    """Top every class up to N_1 samples with SMOTE synthetics."""
    rng = np.random.default_rng(seed)
    target = int(dataset.class_counts[0])
    inputs, labels = [dataset.inputs], [dataset.labels]
    for label in range(1, dataset.num_classes):
        deficit = target - int(dataset.class_counts[label])
        if deficit <= 0:
            continue
        points = dataset.inputs[dataset.indices_of(label)]
        inputs.append(_smote_draws(points, deficit, k_neighbors, rng))
        labels.append(np.full(deficit, label, dtype=np.int64))
    return LabeledDataset(np.vstack(inputs), np.concatenate(labels), dataset.num_classes)
