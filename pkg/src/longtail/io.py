"""Dataset import/export: CSV files and IDX raster-digit files."""

import gzip
import logging
import struct
from pathlib import Path

import numpy as np

from .dataset import DatasetError, LabeledDataset

logger = logging.getLogger(__name__)

# IDX type code for unsigned bytes, the only type digit files use.
IDX_UBYTE = 0x08


def save_csv(dataset: LabeledDataset, path) -> Path:
    """Write `x0,...,x{d-1},label` with a header row and full float64 precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ",".join([f"x{i}" for i in range(dataset.dim)] + ["label"])
    table = np.hstack([dataset.inputs, dataset.labels[:, None].astype(np.float64)])
    fmt = ["%.17g"] * dataset.dim + ["%d"]
    np.savetxt(path, table, delimiter=",", header=header, comments="", fmt=fmt)
    return path


def load_csv(path) -> LabeledDataset:
    """
    Read a CSV written by save_csv().

    Classes are re-indexed by descending count, which is the identity for files
    this package exports.
    """
    table = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
    if table.shape[1] < 2:
        raise DatasetError(f"{path}: expected feature columns plus a label column")
    dataset, _ = LabeledDataset.from_unsorted(table[:, :-1], table[:, -1].astype(np.int64))
    return dataset


def read_idx(path) -> np.ndarray:
    """
    Read an IDX array (optionally gzipped).

    Format: two zero bytes, a type byte (0x08 = ubyte), a dimension count,
    then one big-endian uint32 per dimension followed by the raw data.
    """
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        raw = fh.read()

    if len(raw) < 4 or raw[0] != 0 or raw[1] != 0:
        raise DatasetError(f"{path}: bad IDX magic")
    type_code, ndim = raw[2], raw[3]
    if type_code != IDX_UBYTE:
        raise DatasetError(f"{path}: unsupported IDX type 0x{type_code:02x}")
    dims = struct.unpack(f">{ndim}I", raw[4 : 4 + 4 * ndim])
    data = np.frombuffer(raw, dtype=np.uint8, offset=4 + 4 * ndim)
    if data.size != int(np.prod(dims)):
        raise DatasetError(f"{path}: expected {int(np.prod(dims))} values, found {data.size}")
    return data.reshape(dims)


def load_idx(images_path, labels_path, per_class: int | None = None, seed=0) -> LabeledDataset:
    """
    Load an IDX image/label pair as flattened vectors scaled to [0, 1].

    Args:
        images_path: IDX file of shape (N, rows, cols)
        labels_path: IDX file of shape (N,)
        per_class: If set, keep exactly this many random samples per class
        seed: Seed for the per-class subsample
    """
    images = read_idx(images_path)
    labels = read_idx(labels_path).astype(np.int64)
    if images.shape[0] != labels.shape[0]:
        raise DatasetError(f"{images.shape[0]} images but {labels.shape[0]} labels")

    inputs = images.reshape(images.shape[0], -1).astype(np.float64) / 255.0
    logger.debug("Loaded %d IDX samples of dimension %d", inputs.shape[0], inputs.shape[1])

    if per_class is not None:
        rng = np.random.default_rng(seed)
        keep = []
        for label in np.unique(labels):
            idx = np.flatnonzero(labels == label)
            if idx.size < per_class:
                raise DatasetError(f"Class {label} has {idx.size} samples, need {per_class}")
            keep.append(np.sort(rng.choice(idx, size=per_class, replace=False)))
        keep = np.concatenate(keep)
        inputs, labels = inputs[keep], labels[keep]

    dataset, _ = LabeledDataset.from_unsorted(inputs, labels)
    return dataset
