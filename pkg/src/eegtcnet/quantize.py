"""Simulated 8-bit post-training quantization.

Weights: symmetric per-tensor int8, codes in [-127, 127], zero-point 0.
Activations: asymmetric per-buffer grids calibrated from min/max over a
calibration set (zero always included in the range, so padded regions
quantize exactly).  Execution stores integers but computes in real
arithmetic: each buffer is rounded onto its grid and immediately
dequantized before feeding the next layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import run_layers
from .errors import CalibrationError
from .graphs import LayerGraph, require_valid
from .store import QuantizedWeightStore, WeightStore
from .trials import TrialSet

QMIN, QMAX = -128, 127
#: Weight scale floor for all-constant tensors.
SCALE_FLOOR = 1e-12


@dataclass(frozen=True)
class QuantParams:
    """Per-tensor weight grids and per-buffer activation grids."""

    weight_scales: dict[str, float]
    weight_zero_points: dict[str, int]
    activations: tuple[tuple[float, int], ...]  # (scale, zero_point) per buffer


def quantize_tensor(t: np.ndarray) -> tuple[np.ndarray, float]:
    """Symmetric int8 codes and scale; |dequant - value| <= scale/2."""
    scale = max(float(np.abs(t).max(initial=0.0)), SCALE_FLOOR) / 127.0
    codes = np.clip(np.rint(t.astype(np.float64) / scale), -127, 127).astype(np.int8)
    return codes, scale


def _activation_grid(lo: float, hi: float) -> tuple[float, int]:
    lo, hi = min(lo, 0.0), max(hi, 0.0)
    if hi - lo <= 0.0:
        return 1.0, 0
    scale = (hi - lo) / (QMAX - QMIN)
    zero_point = int(round(QMIN - lo / scale))
    return scale, max(QMIN, min(QMAX, zero_point))


def fake_quant(x: np.ndarray, scale: float, zero_point: int) -> np.ndarray:
    q = np.clip(np.rint(x.astype(np.float64) / scale) + zero_point, QMIN, QMAX)
    return ((q - zero_point) * scale).astype(np.float32)


def quantize_weights(
    store: WeightStore, calibration: TrialSet
) -> tuple[QuantizedWeightStore, QuantParams]:
    """Quantize every weight tensor and calibrate every activation buffer."""
    if calibration.n_trials == 0:
        raise CalibrationError("calibration set is empty")
    graph = require_valid(store.graph())

    codes: dict[str, np.ndarray] = {}
    scales: dict[str, float] = {}
    zero_points: dict[str, int] = {}
    for name, t in store.entries.items():
        codes[name], scales[name] = quantize_tensor(t)
        zero_points[name] = 0

    n_buffers = len(graph.layers) + 1
    lo = np.full(n_buffers, np.inf)
    hi = np.full(n_buffers, -np.inf)
    for i in range(calibration.n_trials):
        for b, buf in enumerate(run_layers(graph, store, calibration.data[i])):
            lo[b] = min(lo[b], float(buf.min()))
            hi[b] = max(hi[b], float(buf.max()))
    activations = tuple(_activation_grid(lo[b], hi[b]) for b in range(n_buffers))

    qstore = QuantizedWeightStore(
        codes, scales, zero_points, store.hp, store.family,
        activation_quant=list(activations), extra_meta=dict(store.extra_meta))
    return qstore, QuantParams(scales, zero_points, activations)


def forward_quantized(
    graph: LayerGraph, qstore: QuantizedWeightStore, trial: np.ndarray
) -> np.ndarray:
    """Float forward over dequantized weights with every buffer (except
    the final probabilities) rounded onto its calibrated grid."""
    if qstore.activation_quant is None:
        raise CalibrationError("store carries no activation calibration")
    require_valid(graph)
    grids = qstore.activation_quant

    def onto_grid(index: int, kind, out: np.ndarray) -> np.ndarray:
        if kind == "SoftmaxAct":
            return out
        return fake_quant(out, *grids[index])

    return run_layers(graph, qstore.dequantized(), trial, transform=onto_grid)[-1]
