"""Labeled datasets whose classes are indexed from most to least frequent."""

import hashlib
from dataclasses import dataclass, field

import numpy as np


class DatasetError(ValueError):
    """Raised when a dataset violates its class-count invariants."""


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """
    Inputs (N x d) with integer labels in 0..K-1.

    Class 0 is the most frequent class: class_counts is non-increasing and
    every class holds at least one sample. Use from_unsorted() to build a
    dataset from arbitrary labels; the plain constructor only validates.
    """

    inputs: np.ndarray
    labels: np.ndarray
    num_classes: int | None = None
    class_counts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        labels = np.asarray(self.labels).astype(np.int64)
        if inputs.ndim != 2 or labels.shape != (inputs.shape[0],):
            raise DatasetError(f"Inputs {inputs.shape} and labels {labels.shape} do not match")
        if labels.size == 0:
            raise DatasetError("Dataset is empty")
        if labels.min() < 0:
            raise DatasetError("Labels must be non-negative")

        num_classes = self.num_classes if self.num_classes is not None else int(labels.max()) + 1
        if labels.max() >= num_classes:
            raise DatasetError(f"Label {labels.max()} out of range for {num_classes} classes")
        counts = np.bincount(labels, minlength=num_classes)

        if counts.min() < 1:
            raise DatasetError(
                f"Every class needs at least one sample, got counts {counts.tolist()}"
            )
        if np.any(counts[:-1] < counts[1:]):
            raise DatasetError(
                f"Class counts must be non-increasing, got {counts.tolist()} "
                "(use LabeledDataset.from_unsorted to re-index)"
            )

        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "num_classes", num_classes)
        object.__setattr__(self, "class_counts", counts)

    @classmethod
    def from_unsorted(cls, inputs, labels) -> tuple:
        """
        Re-index classes by descending count (ties keep the original label order).

        Returns:
            (dataset, mapping) where mapping[new_label] is the original label
        """
        labels = np.asarray(labels)
        originals, counts = np.unique(labels, return_counts=True)
        order = sorted(range(len(originals)), key=lambda i: (-counts[i], originals[i]))
        mapping = originals[order]
        lookup = {original: new for new, original in enumerate(mapping.tolist())}
        relabeled = np.array([lookup[label] for label in labels.tolist()], dtype=np.int64)
        return cls(inputs, relabeled, len(mapping)), mapping

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]

    def __len__(self) -> int:
        return self.labels.shape[0]

    def indices_of(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)

    def subset(self, indices) -> "LabeledDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(self.inputs[indices], self.labels[indices], self.num_classes)

    def is_balanced(self) -> bool:
        return bool(np.all(self.class_counts == self.class_counts[0]))

    def content_hash(self) -> str:
        """sha256 over inputs and labels, used as a cache key."""
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.inputs, dtype="<f8").tobytes())
        digest.update(np.ascontiguousarray(self.labels, dtype="<i8").tobytes())
        digest.update(str(self.num_classes).encode())
        return digest.hexdigest()
