"""Tests for netcore optimizer, schedule, checkpoint and seed modules."""

import struct

import numpy as np
import pytest

from netcore import (
    DenseLayer,
    DifferentiableNet,
    LrSchedule,
    OptimizerState,
    ShapeError,
    dumps_checkpoint,
    load_checkpoint,
    loads_checkpoint,
    save_checkpoint,
    seed_sequence,
    sgd_step,
)


def _scalar_net(w=1.0):
    return DifferentiableNet([DenseLayer(np.array([[w]]), np.zeros(1), "identity")])


class TestSgdStep:
    """Test momentum SGD updates."""

    def test_zero_gradient_no_decay(self, small_net):
        """Test zero gradients and zero weight decay leave parameters unchanged."""
        state = OptimizerState.for_network(small_net, weight_decay=0.0)
        grads = [np.zeros_like(p) for p in small_net.parameters()]
        net, _ = sgd_step(small_net, grads, state)

        for a, b in zip(net.parameters(), small_net.parameters(), strict=True):
            np.testing.assert_array_equal(a, b)

    def test_single_scalar_step(self):
        """Test w=1, grad=1, lr=0.1, fresh momentum gives w=0.9 and v=1."""
        net = _scalar_net(1.0)
        state = OptimizerState.for_network(net, lr=0.1)
        grads = [np.array([[1.0]]), np.zeros(1)]
        net, state = sgd_step(net, grads, state)

        assert net.layers[0].weight[0, 0] == pytest.approx(0.9)
        assert state.velocities[0][0, 0] == pytest.approx(1.0)

    def test_momentum_accumulates(self):
        """Test the second identical step moves by lr * (0.9 * 1 + 1) = 0.19."""
        net = _scalar_net(1.0)
        state = OptimizerState.for_network(net, lr=0.1)
        grads = [np.array([[1.0]]), np.zeros(1)]
        net, state = sgd_step(net, grads, state)
        before = net.layers[0].weight[0, 0]
        net, state = sgd_step(net, grads, state)

        assert before - net.layers[0].weight[0, 0] == pytest.approx(0.19)
        assert state.velocities[0][0, 0] == pytest.approx(1.9)

    def test_weight_decay(self):
        """Test weight decay adds wd * param to the velocity."""
        net = _scalar_net(2.0)
        state = OptimizerState.for_network(net, lr=0.1, weight_decay=0.5)
        net, state = sgd_step(net, [np.zeros((1, 1)), np.zeros(1)], state)

        assert state.velocities[0][0, 0] == pytest.approx(1.0)
        assert net.layers[0].weight[0, 0] == pytest.approx(1.9)

    def test_inputs_untouched(self, small_net):
        """Test sgd_step returns new objects and keeps its inputs."""
        state = OptimizerState.for_network(small_net)
        original = [p.copy() for p in small_net.parameters()]
        grads = [np.ones_like(p) for p in small_net.parameters()]
        sgd_step(small_net, grads, state)

        for a, b in zip(small_net.parameters(), original, strict=True):
            np.testing.assert_array_equal(a, b)
        assert all(np.all(v == 0) for v in state.velocities)

    def test_empty_state_gets_fresh_buffers(self):
        """Test a state without buffers behaves like a fresh one."""
        net = _scalar_net(1.0)
        new_net, state = sgd_step(net, [np.ones((1, 1)), np.zeros(1)], OptimizerState(lr=0.1))

        assert new_net.layers[0].weight[0, 0] == pytest.approx(0.9)
        assert len(state.velocities) == 2

    def test_gradient_shape_mismatch(self, small_net):
        """Test gradients of the wrong shape raise ShapeError."""
        state = OptimizerState.for_network(small_net)
        grads = [np.ones_like(p) for p in small_net.parameters()]
        grads[1] = np.ones(99)

        with pytest.raises(ShapeError):
            sgd_step(small_net, grads, state)

    def test_gradient_count_mismatch(self, small_net):
        """Test a short gradient list raises ShapeError."""
        with pytest.raises(ShapeError):
            sgd_step(small_net, [np.zeros((4, 6))], OptimizerState.for_network(small_net))


class TestLrSchedule:
    """Test warm-up and step decay."""

    def test_warmup_ramp(self):
        """Test the rate rises linearly during warm-up."""
        schedule = LrSchedule(0.1, warmup_epochs=5)

        rates = [schedule.rate(e) for e in range(5)]
        np.testing.assert_allclose(rates, [0.02, 0.04, 0.06, 0.08, 0.1])
        assert schedule.rate(5) == pytest.approx(0.1)

    def test_warmup_starts_above_zero(self):
        """Test epoch 0 trains at base/W and the rate is proportional to e + 1."""
        schedule = LrSchedule(0.3, warmup_epochs=3)

        assert schedule.rate(0) == pytest.approx(0.1)
        assert schedule.rate(2) == pytest.approx(0.3)
        ratios = [schedule.rate(e) / (e + 1) for e in range(3)]
        np.testing.assert_allclose(ratios, 0.1)

    def test_step_decay(self):
        """Test multiplicative factors apply from their epoch on."""
        schedule = LrSchedule(0.1, warmup_epochs=0, steps=((160, 0.01), (180, 0.1)))

        assert schedule.rate(159) == pytest.approx(0.1)
        assert schedule.rate(160) == pytest.approx(0.001)
        assert schedule.rate(199) == pytest.approx(0.0001)

    def test_non_negative(self):
        """Test the rate is never negative."""
        schedule = LrSchedule(0.5, warmup_epochs=3, steps=((4, 0.5),))

        assert all(schedule.rate(e) >= 0 for e in range(10))

    def test_invalid_values(self):
        """Test negative base rates and steps are rejected."""
        with pytest.raises(ValueError):
            LrSchedule(-0.1)
        with pytest.raises(ValueError):
            LrSchedule(0.1, steps=((5, -1.0),))


class TestCheckpoint:
    """Test the binary network checkpoint format."""

    def test_round_trip_bit_exact(self, small_net, temp_dir):
        """Test save/load reproduces every parameter bit for bit."""
        path = save_checkpoint(small_net, temp_dir / "net.ckpt")
        loaded = load_checkpoint(path)

        assert [layer.activation for layer in loaded.layers] == ["relu", "relu", "identity"]
        for a, b in zip(loaded.parameters(), small_net.parameters(), strict=True):
            assert a.tobytes() == b.tobytes()

    def test_layout(self):
        """Test magic, header length and payload size."""
        net = _scalar_net(0.25)
        blob = dumps_checkpoint(net)
        (header_len,) = struct.unpack_from("<I", blob, 8)

        assert blob[:8] == b"M2MNET1\n"
        assert len(blob) == 8 + 4 + header_len + 2 * 8
        assert struct.unpack_from("<d", blob, 12 + header_len)[0] == 0.25

    def test_bad_magic(self):
        """Test foreign bytes are rejected."""
        with pytest.raises(ValueError, match="magic"):
            loads_checkpoint(b"NOTANET\n" + b"\x00" * 8)

    def test_trailing_bytes(self, small_net):
        """Test extra bytes after the payload are rejected."""
        with pytest.raises(ValueError, match="trailing"):
            loads_checkpoint(dumps_checkpoint(small_net) + b"\x00")


class TestSeedSequence:
    """Test child random streams."""

    def test_same_key_same_stream(self):
        """Test a (seed, key) pair always gives the same numbers."""
        a = np.random.default_rng(seed_sequence(3, 1, 2)).random(4)
        b = np.random.default_rng(seed_sequence(3, 1, 2)).random(4)

        np.testing.assert_array_equal(a, b)

    def test_different_keys_differ(self):
        """Test sibling keys give different streams."""
        a = np.random.default_rng(seed_sequence(3, 1)).random(4)
        b = np.random.default_rng(seed_sequence(3, 2)).random(4)

        assert not np.array_equal(a, b)

    def test_nested_keys(self):
        """Test extending a SeedSequence matches passing the full key."""
        parent = seed_sequence(9, 4)
        a = np.random.default_rng(seed_sequence(parent, 7)).random(3)
        b = np.random.default_rng(seed_sequence(9, 4, 7)).random(3)

        np.testing.assert_array_equal(a, b)
