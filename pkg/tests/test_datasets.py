"""Tests for the longtail package."""

import gzip
import struct

import numpy as np
import pytest
from scipy.stats import norm

from longtail import (
    DatasetConfig,
    DatasetError,
    ImbalanceProfile,
    LabeledDataset,
    ProfileError,
    SplitError,
    build_splits,
    concentric_rings,
    gaussian_mixture,
    load_csv,
    load_idx,
    make_balanced,
    make_long_tail,
    read_idx,
    save_csv,
    split,
    two_moons,
)
from metrics import evaluate
from rebalance import StrategySpec, TrainConfig, train_classifier


def _write_idx(path, array, compress=False):
    array = np.asarray(array, dtype=np.uint8)
    header = bytes([0, 0, 0x08, array.ndim]) + struct.pack(f">{array.ndim}I", *array.shape)
    payload = header + array.tobytes()
    if compress:
        with gzip.open(path, "wb") as fh:
            fh.write(payload)
    else:
        path.write_bytes(payload)
    return path


class TestLabeledDataset:
    """Test dataset invariants."""

    def test_counts(self, long_tail_dataset, helpers):
        """Test class counts are computed and ordered."""
        assert long_tail_dataset.class_counts.tolist() == [40, 20, 5]
        assert long_tail_dataset.dim == 2
        helpers.assert_valid_dataset(long_tail_dataset)

    def test_increasing_counts_rejected(self):
        """Test a rarer class 0 violates the ordering invariant."""
        with pytest.raises(DatasetError, match="non-increasing"):
            LabeledDataset(np.zeros((3, 2)), [0, 1, 1])

    def test_empty_class_rejected(self):
        """Test every declared class needs a sample."""
        with pytest.raises(DatasetError, match="at least one"):
            LabeledDataset(np.zeros((2, 2)), [0, 0], num_classes=2)

    def test_shape_mismatch(self):
        """Test inputs and labels must align."""
        with pytest.raises(DatasetError):
            LabeledDataset(np.zeros((3, 2)), [0, 0])

    def test_from_unsorted(self):
        """Test classes are re-indexed by descending count."""
        dataset, mapping = LabeledDataset.from_unsorted(
            np.arange(12.0).reshape(6, 2), [1, 1, 1, 0, 2, 2]
        )

        assert mapping.tolist() == [1, 2, 0]
        assert dataset.labels.tolist() == [0, 0, 0, 2, 1, 1]
        assert dataset.class_counts.tolist() == [3, 2, 1]

    def test_from_unsorted_ties_keep_label_order(self):
        """Test equal counts keep the original label order."""
        dataset, mapping = LabeledDataset.from_unsorted(np.zeros((4, 1)), [5, 3, 5, 3])

        assert mapping.tolist() == [3, 5]
        assert dataset.labels.tolist() == [1, 0, 1, 0]

    def test_content_hash(self, long_tail_dataset):
        """Test the hash changes with the data and is stable otherwise."""
        same = LabeledDataset(long_tail_dataset.inputs.copy(), long_tail_dataset.labels, 3)
        shifted = LabeledDataset(long_tail_dataset.inputs + 1e-9, long_tail_dataset.labels, 3)

        assert same.content_hash() == long_tail_dataset.content_hash()
        assert shifted.content_hash() != long_tail_dataset.content_hash()


class TestSynthetic:
    """Test the synthetic generators."""

    def test_gaussian_mixture_shape(self):
        """Test counts, dimension and determinism."""
        a = gaussian_mixture(5, 30, 4, 3.0, seed=1)
        b = gaussian_mixture(5, 30, 4, 3.0, seed=1)

        assert a.class_counts.tolist() == [30] * 5
        assert a.dim == 4
        np.testing.assert_array_equal(a.inputs, b.inputs)

    def test_zero_separation(self):
        """Test separation 0 makes every class the same distribution."""
        dataset = gaussian_mixture(3, 4000, 2, 0.0, seed=0)
        means = [dataset.inputs[dataset.indices_of(k)].mean(axis=0) for k in range(3)]

        for mean in means:
            np.testing.assert_allclose(mean, 0.0, atol=0.1)

    def test_two_class_bayes_accuracy(self):
        """Test the sign(x0) rule reaches Phi(mu) for means +-(mu, 0)."""
        mu = 1.0
        dataset = gaussian_mixture(2, 20000, 2, mu, seed=3)
        predictions = np.where(dataset.inputs[:, 0] > 0, 0, 1)
        recall = [np.mean(predictions[dataset.labels == k] == k) for k in (0, 1)]

        assert np.mean(recall) == pytest.approx(norm.cdf(mu), abs=0.01)

    def test_large_separation_linear_classifier(self):
        """Test a linear classifier exceeds 99% bACC at separation 10."""
        train = gaussian_mixture(4, 200, 2, 10.0, seed=0)
        test = gaussian_mixture(4, 100, 2, 10.0, seed=1)
        config = TrainConfig(epochs=10, batch_size=32, lr=0.01, warmup_epochs=0, weight_decay=0.0)
        result = train_classifier(train, StrategySpec("erm"), config, hidden=(), seed=0)

        assert evaluate(result.net, test).bacc > 0.99

    def test_invalid_arguments(self):
        """Test K < 2 and d < 2 are rejected."""
        with pytest.raises(ValueError):
            gaussian_mixture(1, 10, 2, 1.0)
        with pytest.raises(ValueError):
            gaussian_mixture(3, 10, 1, 1.0)

    def test_simplex_layout_equidistant_means(self):
        """Test simplex means sit on the axes, all pairs the same distance apart."""
        dataset = gaussian_mixture(4, 5000, 6, 3.0, seed=0, layout="simplex")
        means = np.array([dataset.inputs[dataset.indices_of(k)].mean(axis=0) for k in range(4)])
        expected = np.zeros((4, 6))
        expected[:, :4] = 3.0 * np.eye(4)

        np.testing.assert_allclose(means, expected, atol=0.1)
        distances = [np.linalg.norm(means[i] - means[j]) for i in range(4) for j in range(i + 1, 4)]
        np.testing.assert_allclose(distances, 3.0 * np.sqrt(2.0), atol=0.15)

    def test_simplex_layout_needs_a_dimension_per_class(self):
        """Test the simplex layout rejects dim < K and unknown layouts are rejected."""
        with pytest.raises(ValueError, match="simplex"):
            gaussian_mixture(10, 5, 8, 3.0, layout="simplex")
        with pytest.raises(ValueError, match="Unknown layout"):
            gaussian_mixture(3, 5, 4, 3.0, layout="sphere")

    def test_moons_and_rings(self):
        """Test the sklearn-backed generators, with noise padding."""
        moons = two_moons(50, noise=0.1, extra_dims=3, seed=0)
        rings = concentric_rings(40, noise=0.05, factor=0.5, seed=0)

        assert moons.class_counts.tolist() == [50, 50]
        assert moons.dim == 5
        assert rings.class_counts.tolist() == [40, 40]
        radii = np.linalg.norm(rings.inputs, axis=1)
        assert radii[rings.labels == 0].mean() > radii[rings.labels == 1].mean()


class TestLongTail:
    """Test the exponential long-tail profile."""

    def test_reference_counts(self):
        """Test n=500, K=5, rho=10 gives (500, 281, 158, 89, 50)."""
        balanced = gaussian_mixture(5, 500, 2, 3.0, seed=0)
        long_tail = make_long_tail(balanced, 10, seed=0)

        assert long_tail.class_counts.tolist() == [500, 281, 158, 89, 50]

    def test_endpoint_counts(self):
        """Test n=5000, K=10, rho=100 keeps 5000 head and 50 tail samples."""
        counts = ImbalanceProfile(100).counts(5000, 10)

        assert counts[0] == 5000
        assert counts[-1] == 50
        assert counts[0] / counts[-1] == pytest.approx(100)

    def test_near_one_ratio(self):
        """Test rho slightly above 1 keeps (almost) every sample."""
        counts = ImbalanceProfile(1.0001).counts(500, 5)

        assert counts.tolist() == [500] * 5

    def test_ratio_must_exceed_one(self):
        """Test rho <= 1 is a profile error."""
        with pytest.raises(ProfileError):
            ImbalanceProfile(1.0)

    def test_empty_tail(self):
        """Test a tail class rounding to zero is a profile error."""
        with pytest.raises(ProfileError, match="empty"):
            ImbalanceProfile(100).counts(10, 3)

    def test_requires_balanced_input(self, long_tail_dataset):
        """Test make_long_tail refuses an already-imbalanced dataset."""
        with pytest.raises(ProfileError, match="balanced"):
            make_long_tail(long_tail_dataset, 10)

    def test_seed_determinism(self, balanced_dataset):
        """Test identical seeds select identical samples."""
        a = make_long_tail(balanced_dataset, 5, seed=4)
        b = make_long_tail(balanced_dataset, 5, seed=4)
        c = make_long_tail(balanced_dataset, 5, seed=5)

        np.testing.assert_array_equal(a.inputs, b.inputs)
        assert not np.array_equal(a.inputs, c.inputs)

    def test_samples_come_from_source(self, balanced_dataset):
        """Test surviving samples are rows of the balanced source."""
        long_tail = make_long_tail(balanced_dataset, 5, seed=0)
        source = {tuple(row) for row in balanced_dataset.inputs}

        assert all(tuple(row) in source for row in long_tail.inputs)


class TestSplit:
    """Test train/val/test splitting."""

    def test_balanced_test(self, balanced_dataset):
        """Test the test split holds exactly test_per_class samples per class."""
        train, val, test = split(balanced_dataset, 0.1, 10, seed=0)

        assert test.class_counts.tolist() == [10] * 4
        assert val.class_counts.tolist() == [4] * 4
        assert train.class_counts.tolist() == [36] * 4

    def test_no_validation(self, balanced_dataset):
        """Test val_fraction 0 returns no validation split."""
        train, val, _ = split(balanced_dataset, 0.0, 10, seed=0)

        assert val is None
        assert len(train) == 160

    def test_disjoint(self, balanced_dataset):
        """Test the three splits do not share samples."""
        train, val, test = split(balanced_dataset, 0.2, 10, seed=1)
        rows = [{tuple(r) for r in part.inputs} for part in (train, val, test)]

        assert not rows[0] & rows[1]
        assert not rows[0] & rows[2]
        assert not rows[1] & rows[2]

    def test_insufficient_samples(self, balanced_dataset):
        """Test asking for more test samples than exist is a split error."""
        with pytest.raises(SplitError):
            split(balanced_dataset, 0.0, 50, seed=0)

    def test_build_splits_tail_only_on_train(self):
        """Test the imbalance profile touches only the train split."""
        config = DatasetConfig(
            num_classes=3, per_class=60, dim=2, val_fraction=0.1, test_per_class=20
        )
        splits = build_splits(config, ImbalanceProfile(4), seed=0)

        assert splits.test.class_counts.tolist() == [20, 20, 20]
        assert splits.val.class_counts.tolist() == [4, 4, 4]
        assert splits.train.class_counts.tolist() == [36, 18, 9]

    def test_balanced_test_bacc_equals_accuracy(self, small_net):
        """Test bACC equals plain accuracy on a balanced test split."""
        dataset = gaussian_mixture(3, 60, 4, 1.0, seed=2)
        _, _, test = split(dataset, 0.0, 20, seed=0)
        report = evaluate(small_net, test)

        assert abs(report.bacc - report.accuracy) < 1e-12


class TestDatasetConfig:
    """Test dataset declarations."""

    def test_unknown_kind(self):
        """Test an unknown kind is rejected."""
        with pytest.raises(ValueError, match="Unknown dataset kind"):
            DatasetConfig(kind="cifar")

    def test_csv_needs_path(self):
        """Test kind csv requires a path."""
        with pytest.raises(ValueError, match="path"):
            DatasetConfig(kind="csv")

    def test_layout_reaches_the_generator(self):
        """Test the declared layout is used when the balanced source is drawn."""
        config = DatasetConfig(num_classes=3, per_class=2000, dim=4, layout="simplex")
        dataset = make_balanced(config, seed=0)

        np.testing.assert_allclose(
            dataset.inputs[dataset.indices_of(2)].mean(axis=0), [0.0, 0.0, 3.0, 0.0], atol=0.1
        )
        with pytest.raises(ValueError, match="Unknown layout"):
            DatasetConfig(layout="sphere")


class TestCsv:
    """Test CSV export and import."""

    def test_round_trip(self, long_tail_dataset, temp_dir):
        """Test exported files load back bit-exactly."""
        path = save_csv(long_tail_dataset, temp_dir / "data" / "train.csv")
        loaded = load_csv(path)

        assert path.read_text().splitlines()[0] == "x0,x1,label"
        np.testing.assert_array_equal(loaded.inputs, long_tail_dataset.inputs)
        np.testing.assert_array_equal(loaded.labels, long_tail_dataset.labels)

    def test_csv_dataset_kind(self, balanced_dataset, temp_dir):
        """Test build_splits reads a csv source."""
        path = save_csv(balanced_dataset, temp_dir / "source.csv")
        config = DatasetConfig(kind="csv", path=str(path), val_fraction=0.0, test_per_class=10)
        splits = build_splits(config, None, seed=0)

        assert splits.train.class_counts.tolist() == [40] * 4


class TestIdx:
    """Test the IDX reader."""

    def test_read(self, temp_dir):
        """Test an uncompressed IDX array is read with its dimensions."""
        array = np.arange(24, dtype=np.uint8).reshape(2, 3, 4)
        path = _write_idx(temp_dir / "images.idx", array)

        np.testing.assert_array_equal(read_idx(path), array)

    def test_read_gzip(self, temp_dir):
        """Test gzipped files are detected by suffix."""
        array = np.array([3, 1, 4], dtype=np.uint8)
        path = _write_idx(temp_dir / "labels.idx.gz", array, compress=True)

        np.testing.assert_array_equal(read_idx(path), array)

    def test_bad_magic(self, temp_dir):
        """Test a file without the zero prefix is rejected."""
        path = temp_dir / "bad.idx"
        path.write_bytes(b"\x01\x00\x08\x01\x00\x00\x00\x01\x00")

        with pytest.raises(DatasetError, match="magic"):
            read_idx(path)

    def test_truncated(self, temp_dir):
        """Test a short payload is rejected."""
        path = temp_dir / "short.idx"
        path.write_bytes(bytes([0, 0, 8, 1]) + struct.pack(">I", 5) + b"\x00\x00")

        with pytest.raises(DatasetError, match="expected"):
            read_idx(path)

    def test_load_idx(self, temp_dir):
        """Test images are flattened, scaled to [0, 1] and subsampled per class."""
        images = np.zeros((6, 2, 2), dtype=np.uint8)
        images[:, 0, 0] = 255
        labels = np.array([0, 1, 0, 1, 0, 1], dtype=np.uint8)
        images_path = _write_idx(temp_dir / "images.idx", images)
        labels_path = _write_idx(temp_dir / "labels.idx", labels)

        dataset = load_idx(images_path, labels_path, per_class=2, seed=0)

        assert dataset.dim == 4
        assert dataset.class_counts.tolist() == [2, 2]
        assert dataset.inputs.max() == 1.0
        assert dataset.inputs.min() == 0.0

    def test_load_idx_not_enough(self, temp_dir):
        """Test asking for more samples per class than exist raises."""
        images_path = _write_idx(temp_dir / "images.idx", np.zeros((2, 1, 1)))
        labels_path = _write_idx(temp_dir / "labels.idx", np.array([0, 1]))

        with pytest.raises(DatasetError, match="need"):
            load_idx(images_path, labels_path, per_class=2)

