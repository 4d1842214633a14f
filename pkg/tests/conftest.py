"""Pytest configuration and shared fixtures."""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from longtail import LabeledDataset, gaussian_mixture
from netcore import DenseLayer, DifferentiableNet
from rebalance import TrainConfig


@pytest.fixture
def temp_dir():
    """Create temporary directory for tests."""
    tmp = Path(tempfile.mkdtemp())
    yield tmp
    shutil.rmtree(tmp, ignore_errors=True)


@pytest.fixture
def rng():
    """Fixed-seed generator for test inputs."""
    return np.random.default_rng(1234)


@pytest.fixture
def small_net():
    """4 -> 6 -> 5 -> 3 ReLU network."""
    return DifferentiableNet.initialize(4, [6, 5], 3, seed=7)


@pytest.fixture
def linear_net():
    """Single-layer (softmax regression) network with 2 inputs and 2 classes."""
    weight = np.array([[2.0, -2.0], [0.5, -0.5]])
    return DifferentiableNet([DenseLayer(weight, np.zeros(2), "identity")])


@pytest.fixture
def long_tail_dataset():
    """Three Gaussian classes with counts (40, 20, 5)."""
    rng = np.random.default_rng(0)
    counts = (40, 20, 5)
    means = np.array([[3.0, 0.0], [-3.0, 0.0], [0.0, 3.0]])
    labels = np.repeat(np.arange(3), counts)
    inputs = means[labels] + 0.5 * rng.standard_normal((labels.size, 2))
    return LabeledDataset(inputs, labels, 3)


@pytest.fixture
def balanced_dataset():
    """4 classes x 50 samples in 3 dimensions."""
    return gaussian_mixture(4, 50, 3, separation=4.0, seed=0)


@pytest.fixture
def quick_train_config():
    """A few epochs of small-batch SGD."""
    return TrainConfig(epochs=4, batch_size=16, lr=0.05, warmup_epochs=1, weight_decay=0.0)


@pytest.fixture
def experiment_yaml(temp_dir):
    """Write a seconds-scale experiment config and return its path."""

    def _write(extra: str = "", strategies: str | None = None):
        strategies = strategies or (
            "strategies:\n"
            "  - kind: erm\n"
            "  - kind: rs\n"
            "    deferred: true\n"
            "  - kind: m2m\n"
            "    deferred: true\n"
        )
        text = (
            "dataset:\n"
            "  kind: gaussian_mixture\n"
            "  num_classes: 3\n"
            "  per_class: 40\n"
            "  dim: 3\n"
            "  separation: 3.0\n"
            "  val_fraction: 0.1\n"
            "  test_per_class: 10\n"
            "imbalance:\n"
            "  ratio: 5\n"
            "network:\n"
            "  hidden: [8]\n"
            "train:\n"
            "  epochs: 3\n"
            "  batch_size: 8\n"
            "  warmup_epochs: 1\n"
            "m2m:\n"
            "  steps: 2\n"
            f"{strategies}"
            "seeds: [0, 1]\n"
            f"output_dir: {temp_dir / 'runs'}\n"
            f"{extra}"
        )
        path = temp_dir / "experiment.yaml"
        path.write_text(text)
        return path

    return _write


# Configure pytest markers
def pytest_configure(config):
    """Configure custom pytest markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


# Helpers for assertions
class Helpers:
    """Helper methods for tests."""

    @staticmethod
    def numeric_gradient(fn, x, eps=1e-6):
        """Central finite differences of a scalar function at x (any shape)."""
        x = np.array(x, dtype=np.float64, copy=True)
        grad = np.zeros_like(x)
        it = np.nditer(x, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            original = x[idx]
            x[idx] = original + eps
            plus = fn(x)
            x[idx] = original - eps
            minus = fn(x)
            x[idx] = original
            grad[idx] = (plus - minus) / (2 * eps)
        return grad

    @staticmethod
    def relative_error(analytic, numeric):
        """||a - n|| / (||a|| + ||n|| + 1e-8)."""
        analytic, numeric = np.asarray(analytic), np.asarray(numeric)
        return np.linalg.norm(analytic - numeric) / (
            np.linalg.norm(analytic) + np.linalg.norm(numeric) + 1e-8
        )

    @staticmethod
    def away_from_kinks(net, x, margin=1e-3):
        """True when no hidden pre-activation lies within `margin` of zero."""
        _, cache = net.forward_with_cache(np.atleast_2d(x))
        return all(
            np.all(np.abs(z) > margin)
            for layer, z in zip(net.layers, cache.pre_activations, strict=True)
            if layer.activation == "relu"
        )

    @staticmethod
    def assert_valid_dataset(dataset):
        """Assert the class-count invariants of a LabeledDataset."""
        counts = dataset.class_counts
        assert counts.sum() == len(dataset)
        assert np.all(counts >= 1)
        assert np.all(np.diff(counts) <= 0)


@pytest.fixture
def helpers():
    """Provide helper methods to tests."""
    return Helpers()
