"""Class-imbalanced dataset construction."""

from .dataset import DatasetError, LabeledDataset
from .io import load_csv, load_idx, read_idx, save_csv
from .profile import ImbalanceProfile, ProfileError, SplitError, make_long_tail, split
from .splits import DatasetConfig, DatasetSplits, build_splits, make_balanced
from .synthetic import concentric_rings, gaussian_mixture, two_moons

__all__ = [
    "LabeledDataset",
    "DatasetError",
    "ImbalanceProfile",
    "ProfileError",
    "SplitError",
    "make_long_tail",
    "split",
    "gaussian_mixture",
    "two_moons",
    "concentric_rings",
    "save_csv",
    "load_csv",
    "read_idx",
    "load_idx",
    "DatasetConfig",
    "DatasetSplits",
    "build_splits",
    "make_balanced",
]
