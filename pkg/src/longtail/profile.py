"""Long-tail subsampling and balanced train/val/test splitting."""

from dataclasses import dataclass

import numpy as np

from .dataset import DatasetError, LabeledDataset


class ProfileError(ValueError):
    """Raised when an imbalance profile cannot be applied."""


class SplitError(ValueError):
    """Raised when a dataset is too small for the requested split."""


def _round_half_up(values) -> np.ndarray:
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5).astype(np.int64)


@dataclass(frozen=True)
class ImbalanceProfile:
    """
    Exponential long-tail profile with imbalance ratio rho = N_1 / N_K.

    Class k (0-based) keeps round(n * rho^(-k / (K - 1))) samples.
    """

    ratio: float = 100.0
    decay: str = "exponential"

    def __post_init__(self):
        if not self.ratio > 1:
            raise ProfileError(f"Imbalance ratio must be > 1, got {self.ratio}")
        if self.decay != "exponential":
            raise ProfileError(f"Unsupported decay '{self.decay}' (only 'exponential')")

    def counts(self, per_class: int, num_classes: int) -> np.ndarray:
        if num_classes < 2:
            raise ProfileError("A long-tail profile needs at least 2 classes")
        exponents = -np.arange(num_classes) / (num_classes - 1)
        counts = _round_half_up(per_class * self.ratio**exponents)
        if counts[-1] < 1:
            raise ProfileError(
                f"Tail class would be empty: {per_class} samples with ratio {self.ratio}"
            )
        return np.maximum(counts, 1)

    def apply(self, balanced: LabeledDataset, seed=0) -> LabeledDataset:
        return make_long_tail(balanced, self.ratio, seed)


def make_long_tail(balanced: LabeledDataset, ratio: float, seed=0) -> LabeledDataset:
    """
    Subsample a class-balanced dataset into an exponential long tail.

    Args:
        balanced: Dataset with the same count n in every class
        ratio: Imbalance ratio rho > 1
        seed: Selects which samples survive in each class

    Returns:
        Dataset whose class k keeps round(n * rho^(-k/(K-1))) samples
    """
    if not balanced.is_balanced():
        raise ProfileError(
            "make_long_tail expects a balanced dataset, "
            f"got counts {balanced.class_counts.tolist()}"
        )
    profile = ImbalanceProfile(ratio)
    targets = profile.counts(int(balanced.class_counts[0]), balanced.num_classes)

    rng = np.random.default_rng(seed)
    keep = []
    for label, target in enumerate(targets):
        chosen = rng.choice(balanced.indices_of(label), size=int(target), replace=False)
        keep.append(np.sort(chosen))
    return balanced.subset(np.concatenate(keep))


def split(dataset: LabeledDataset, val_fraction: float, test_per_class: int, seed=0) -> tuple:
    """
    Split into (train, val, test) with an exactly balanced test split.

    Every class gives `test_per_class` samples to test, then round(val_fraction *
    rest) (at least one when val_fraction > 0) to validation; the remainder is
    train. val is None when val_fraction is 0.
    """
    if not 0 <= val_fraction < 1:
        raise SplitError(f"val_fraction must lie in [0, 1), got {val_fraction}")
    if test_per_class < 1:
        raise SplitError(f"test_per_class must be >= 1, got {test_per_class}")

    rng = np.random.default_rng(seed)
    train_idx, val_idx, test_idx = [], [], []
    for label in range(dataset.num_classes):
        idx = rng.permutation(dataset.indices_of(label))
        rest = idx.size - test_per_class
        n_val = 0
        if val_fraction > 0:
            n_val = max(1, int(_round_half_up(val_fraction * rest)))
        if rest - n_val < 1:
            raise SplitError(
                f"Class {label} has {idx.size} samples, too few for "
                f"{test_per_class} test + {n_val} validation + 1 train"
            )
        test_idx.append(np.sort(idx[:test_per_class]))
        val_idx.append(np.sort(idx[test_per_class : test_per_class + n_val]))
        train_idx.append(np.sort(idx[test_per_class + n_val :]))

    try:
        train = dataset.subset(np.concatenate(train_idx))
        val = dataset.subset(np.concatenate(val_idx)) if val_fraction > 0 else None
        test = dataset.subset(np.concatenate(test_idx))
    except DatasetError as e:
        raise SplitError(f"Split broke the class ordering: {e}") from e
    return train, val, test
