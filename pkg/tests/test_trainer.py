"""Tests for rebalance.trainer module."""

import numpy as np
import pytest

import rebalance.trainer as trainer
from longtail import gaussian_mixture
from netcore import DifferentiableNet
from rebalance import StrategySpec, TrainConfig, train_classifier


def _same_parameters(a, b):
    pairs = zip(a.parameters(), b.parameters(), strict=True)
    return all(np.array_equal(pa, pb) for pa, pb in pairs)


class TestTrainConfig:
    """Test training configuration."""

    def test_defaults(self):
        """Test momentum 0.9 and a 5-epoch warm-up by default."""
        config = TrainConfig()

        assert config.momentum == 0.9
        assert config.schedule().rate(0) == pytest.approx(0.1 / 5)

    def test_lr_steps_normalized(self):
        """Test list-valued steps become tuples."""
        config = TrainConfig(lr_steps=[[30, 0.1]])

        assert config.lr_steps == ((30, 0.1),)

    def test_invalid(self):
        """Test non-positive epochs and batch sizes are rejected."""
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)
        with pytest.raises(ValueError):
            TrainConfig(batch_size=0)


class TestTrainClassifier:
    """Test the strategy-aware training loop."""

    def test_deterministic(self, long_tail_dataset, quick_train_config):
        """Test identical seeds give bit-identical parameters."""
        spec = StrategySpec("rs", deferred=True)
        a = train_classifier(long_tail_dataset, spec, quick_train_config, hidden=(8,), seed=3)
        b = train_classifier(long_tail_dataset, spec, quick_train_config, hidden=(8,), seed=3)

        assert _same_parameters(a.net, b.net)
        assert a.history == b.history

    def test_seed_changes_result(self, long_tail_dataset, quick_train_config):
        """Test different seeds give different networks."""
        erm = StrategySpec("erm")
        a = train_classifier(long_tail_dataset, erm, quick_train_config, (8,), seed=0)
        b = train_classifier(long_tail_dataset, erm, quick_train_config, (8,), seed=1)

        assert not _same_parameters(a.net, b.net)

    def test_history_per_epoch(self, long_tail_dataset, quick_train_config):
        """Test one finite loss per epoch."""
        result = train_classifier(long_tail_dataset, StrategySpec("rw"), quick_train_config, (8,))

        assert len(result.history) == quick_train_config.epochs
        assert all(np.isfinite(result.history))

    def test_full_batch_loss_non_increasing(self):
        """Test full-batch ERM on a separable 2-class set never increases the loss."""
        train = gaussian_mixture(2, 50, 2, 2.0, seed=0)
        config = TrainConfig(
            epochs=15, batch_size=100, lr=0.1, warmup_epochs=0, momentum=0.0, weight_decay=0.0
        )
        result = train_classifier(train, StrategySpec("erm"), config, hidden=(), seed=0)

        assert all(b <= a + 1e-6 for a, b in zip(result.history, result.history[1:], strict=False))
        assert result.history[-1] < result.history[0]

    def test_deferred_sampler_switch(self, long_tail_dataset, mocker):
        """Test DRS draws balanced batches only from defer_epoch on."""
        spy = mocker.spy(trainer, "class_balanced_batch")
        config = TrainConfig(epochs=5, batch_size=16, warmup_epochs=0, defer_epoch=3)
        train_classifier(long_tail_dataset, StrategySpec("rs", deferred=True), config, (4,))

        # 65 samples / 16 per batch -> 5 batches per epoch, 2 balanced epochs
        assert spy.call_count == 10

    def test_hook_only_on_generation_epochs(self, long_tail_dataset):
        """Test the batch hook runs only after deferral for deferred M2m."""
        calls = []

        def hook(net, x, y, seed):
            calls.append(seed.spawn_key)
            return x, y

        config = TrainConfig(epochs=4, batch_size=32, warmup_epochs=0, defer_epoch=2)
        train_classifier(
            long_tail_dataset, StrategySpec("m2m", deferred=True), config, (4,), batch_hook=hook
        )

        # epochs 2 and 3, ceil(65 / 32) = 3 batches each
        assert len(calls) == 6
        assert {key[-2] for key in calls} == {2, 3}

    def test_identity_hook_matches_drs(self, long_tail_dataset):
        """Test a hook that returns its batch unchanged reproduces DRS exactly."""
        config = TrainConfig(epochs=4, batch_size=16, warmup_epochs=1, defer_epoch=2)
        drs = train_classifier(
            long_tail_dataset, StrategySpec("rs", deferred=True), config, (6,), seed=5
        )
        m2m = train_classifier(
            long_tail_dataset,
            StrategySpec("m2m", deferred=True),
            config,
            (6,),
            seed=5,
            batch_hook=lambda net, x, y, seed: (x, y),
        )

        assert _same_parameters(drs.net, m2m.net)

    def test_smote_grows_training_set(self, long_tail_dataset, quick_train_config, mocker):
        """Test the SMOTE strategy trains on a class-balanced augmented set."""
        spy = mocker.spy(trainer, "smote_oversample")
        train_classifier(long_tail_dataset, StrategySpec("smote"), quick_train_config, (4,))

        assert spy.call_count == 1
        assert spy.spy_return.class_counts.tolist() == [40, 40, 40]

    def test_start_from_network(self, long_tail_dataset, quick_train_config):
        """Test training can continue from a given network."""
        start = DifferentiableNet.initialize(2, [5], 3, seed=0)
        result = train_classifier(
            long_tail_dataset, StrategySpec("erm"), quick_train_config, net=start
        )

        assert [p.shape for p in result.net.parameters()] == [p.shape for p in start.parameters()]

    def test_invalid_defer_epoch(self, long_tail_dataset):
        """Test a deferral past the last epoch is rejected."""
        config = TrainConfig(epochs=3, defer_epoch=3)

        with pytest.raises(ValueError, match="defer_epoch"):
            train_classifier(long_tail_dataset, StrategySpec("rs", deferred=True), config)
