"""Per-class loss weights for re-weighting baselines, normalized to mean 1."""

import numpy as np

DEFAULT_CBRW_BETA = 0.9999


def _normalize(raw: np.ndarray) -> np.ndarray:
    return raw / raw.mean()


def rw_weights(class_counts) -> np.ndarray:
    """Inverse-frequency weights: w_k proportional to 1 / N_k."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 1):
        raise ValueError(f"Class counts must be >= 1, got {counts.tolist()}")
    return _normalize(1.0 / counts)


def effective_numbers(class_counts, beta: float) -> np.ndarray:
    """(1 - beta^N_k) / (1 - beta), evaluated without cancellation near beta = 1."""
    if not 0 <= beta < 1:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    counts = np.asarray(class_counts, dtype=np.float64)
    if beta == 0:
        return np.ones_like(counts)
    return -np.expm1(counts * np.log(beta)) / (1.0 - beta)


def cbrw_weights(class_counts, beta: float = DEFAULT_CBRW_BETA) -> np.ndarray:
    """Class-balanced weights: inverse effective number per class."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 1):
        raise ValueError(f"Class counts must be >= 1, got {counts.tolist()}")
    return _normalize(1.0 / effective_numbers(counts, beta))
