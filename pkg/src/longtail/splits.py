"""Dataset declaration and the train/val/test pipeline built from it."""

from dataclasses import dataclass

from .dataset import LabeledDataset
from .io import load_csv, load_idx
from .profile import ImbalanceProfile, split
from .synthetic import LAYOUTS, concentric_rings, gaussian_mixture, two_moons

DATASET_KINDS = ("gaussian_mixture", "moons", "rings", "idx", "csv")


@dataclass(frozen=True)
class DatasetConfig:
    """Where the balanced source data comes from and how it is split."""

    kind: str = "gaussian_mixture"
    num_classes: int = 10
    per_class: int = 500
    dim: int = 16
    separation: float = 3.0
    layout: str = "circle"
    noise: float = 0.1
    factor: float = 0.5
    extra_dims: int = 0
    path: str | None = None
    images_path: str | None = None
    labels_path: str | None = None
    val_fraction: float = 0.1
    test_per_class: int = 100

    def __post_init__(self):
        if self.kind not in DATASET_KINDS:
            raise ValueError(f"Unknown dataset kind '{self.kind}', expected one of {DATASET_KINDS}")
        if self.layout not in LAYOUTS:
            raise ValueError(f"Unknown layout '{self.layout}', expected one of {LAYOUTS}")
        if self.kind == "csv" and not self.path:
            raise ValueError("dataset.path is required for kind 'csv'")
        if self.kind == "idx" and not (self.images_path and self.labels_path):
            raise ValueError("dataset.images_path and dataset.labels_path are required for 'idx'")


@dataclass(frozen=True)
class DatasetSplits:
    train: LabeledDataset
    val: LabeledDataset | None
    test: LabeledDataset


def make_balanced(config: DatasetConfig, seed=0) -> LabeledDataset:
    """Draw (or load) the class-balanced source dataset."""
    if config.kind == "gaussian_mixture":
        return gaussian_mixture(
            config.num_classes,
            config.per_class,
            config.dim,
            config.separation,
            seed,
            layout=config.layout,
        )
    if config.kind == "moons":
        return two_moons(config.per_class, config.noise, config.extra_dims, seed)
    if config.kind == "rings":
        return concentric_rings(
            config.per_class, config.noise, config.factor, config.extra_dims, seed
        )
    if config.kind == "idx":
        return load_idx(config.images_path, config.labels_path, config.per_class, seed)
    return load_csv(config.path)


def build_splits(config: DatasetConfig, profile: ImbalanceProfile | None, seed=0) -> DatasetSplits:
    """
    Balanced source -> (train, val, test); only train receives the long tail.

    Args:
        config: Dataset declaration
        profile: Imbalance profile for the train split, or None to keep it balanced
        seed: Drives data generation, splitting and subsampling
    """
    balanced = make_balanced(config, seed)
    train, val, test = split(balanced, config.val_fraction, config.test_per_class, seed)
    if profile is not None:
        train = profile.apply(train, seed)
    return DatasetSplits(train, val, test)
