import numpy as np
import pytest

from eegtcnet import (
    TrialSet,
    forward,
    forward_quantized,
    load_weights,
    quantize_weights,
    save_weights,
)
from eegtcnet.errors import CalibrationError
from eegtcnet.quantize import fake_quant, quantize_tensor
from eegtcnet.store import QuantizedWeightStore


def make_trials(n, rng, c=22, t=1125):
    return TrialSet(rng.standard_normal((n, c, t)).astype(np.float32),
                    np.zeros(n, np.int64), 250.0, 4)


class TestWeightQuantization:
    def test_lattice_values_are_exact(self):
        scale = 0.037
        codes = np.array([-127, -5, 0, 3, 127], np.int8)
        t = (codes.astype(np.float64) * scale).astype(np.float32)
        q, s = quantize_tensor(t)
        np.testing.assert_array_equal(q, codes)
        back = (q.astype(np.float64) * s).astype(np.float32)
        np.testing.assert_allclose(back, t, atol=1e-7)

    def test_range_endpoints(self):
        q, s = quantize_tensor(np.array([-1.0, 1.0], np.float32))
        assert s == pytest.approx(1 / 127)
        np.testing.assert_array_equal(q, [-127, 127])

    def test_error_bound_half_scale(self, rng):
        for _ in range(200):
            t = (rng.standard_normal(rng.integers(1, 64)) * 10 ** rng.uniform(-3, 3)
                 ).astype(np.float32)
            q, s = quantize_tensor(t)
            err = np.abs(q.astype(np.float64) * s - t.astype(np.float64)).max()
            assert err <= s / 2 * (1 + 1e-9)

    def test_all_constant_tensor_floors_scale(self):
        q, s = quantize_tensor(np.zeros(5, np.float32))
        assert s > 0
        np.testing.assert_array_equal(q, 0)

    def test_empty_calibration_rejected(self, fixed_store):
        empty = TrialSet(np.zeros((0, 22, 1125), np.float32), np.zeros(0, np.int64), 250.0, 4)
        with pytest.raises(CalibrationError):
            quantize_weights(fixed_store, empty)


class TestFakeQuant:
    def test_idempotent(self, rng):
        x = rng.standard_normal(100).astype(np.float32)
        once = fake_quant(x, 0.05, 3)
        np.testing.assert_array_equal(fake_quant(once, 0.05, 3), once)

    def test_zero_is_representable(self):
        out = fake_quant(np.zeros(4, np.float32), 0.013, -7)
        np.testing.assert_array_equal(out, 0.0)


class TestQuantizedForward:
    def test_agreement_and_roundtrip(self, fixed_graph, fixed_store, rng):
        calib = make_trials(16, rng)
        qstore, qp = quantize_weights(fixed_store, calib)
        assert len(qp.activations) == len(fixed_graph.layers) + 1

        blob = save_weights(qstore)
        loaded = load_weights(blob)
        assert isinstance(loaded, QuantizedWeightStore)
        assert save_weights(loaded) == blob
        assert loaded.activation_quant is not None

        agree = 0
        n = 40
        for i in range(n):
            x = rng.standard_normal((22, 1125)).astype(np.float32)
            pf = forward(fixed_graph, fixed_store, x)
            pq = forward_quantized(fixed_graph, loaded, x)
            assert abs(float(pq.sum()) - 1.0) < 1e-6
            agree += int(np.argmax(pf) == np.argmax(pq))
        assert agree >= int(0.9 * n)

    def test_uncalibrated_store_rejected(self, fixed_graph, fixed_store, rng):
        calib = make_trials(4, rng)
        qstore, _ = quantize_weights(fixed_store, calib)
        bare = QuantizedWeightStore(qstore.codes, qstore.scales, qstore.zero_points,
                                    qstore.hp, qstore.family, activation_quant=None)
        with pytest.raises(CalibrationError):
            forward_quantized(fixed_graph, bare, np.zeros((22, 1125), np.float32))

    def test_dequantized_store_runs_float_path(self, fixed_graph, fixed_store, rng):
        calib = make_trials(4, rng)
        qstore, _ = quantize_weights(fixed_store, calib)
        x = rng.standard_normal((22, 1125)).astype(np.float32)
        p_deq = forward(fixed_graph, qstore.dequantized(), x)
        p_ref = forward(fixed_graph, fixed_store, x)
        # dequantized weights are near the originals, so outputs are close
        assert np.abs(p_deq - p_ref).max() < 0.1
