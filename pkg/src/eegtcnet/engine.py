"""Layer-by-layer execution of a LayerGraph.

The engine allocates one buffer per layer output (matching the
analyzer's memory model), runs the vectorized kernels, and checks every
intermediate for NaN/Inf.  Dropout is identity here: inference only.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels
from .errors import GeometryError, NonFiniteError
from .graphs import LayerGraph, add_inputs, require_valid
from .standardize import StandardizationStats, apply_standardization
from .store import WeightStore
from .trials import TrialSet

BN_EPS = 1e-3


def _as_2d(x: np.ndarray) -> np.ndarray:
    """Squeeze the singleton height when entering 1D territory."""
    return x[:, 0, :] if x.ndim == 3 else x


def run_layers(
    graph: LayerGraph,
    store: WeightStore,
    trial: np.ndarray,
    transform=None,
) -> list[np.ndarray]:
    """Execute every layer; returns all buffers, buffer 0 = input.

    ``transform(buffer_index, kind, array)`` is applied to every buffer
    as it is produced (kind is None for the input buffer); the
    quantizer uses it to round activations onto their grids.
    """
    expected = graph.input_shape[1:]
    trial = np.asarray(trial, dtype=np.float32)
    if trial.shape != expected:
        raise GeometryError(
            f"trial geometry mismatch: expected C={expected[0]}, T={expected[1]}, "
            f"found {'x'.join(str(d) for d in trial.shape)}")
    x0 = trial.reshape(graph.input_shape)
    if transform is not None:
        x0 = transform(0, None, x0)
    buffers: list[np.ndarray] = [x0]
    w = store.entries
    for i, layer in enumerate(graph.layers):
        name = graph.layer_name(i)
        x = buffers[layer.input_index + 1]
        kind = layer.kind
        if kind == "Conv2DSame":
            out = kernels.conv2d_same(x, w[f"{name}.weight"])
        elif kind == "BatchNorm":
            out = kernels.batchnorm_infer(
                x, w[f"{name}.gamma"], w[f"{name}.beta"],
                w[f"{name}.mean"], w[f"{name}.var"], eps=BN_EPS)
        elif kind == "DepthwiseConv2D":
            out = kernels.depthwise_conv2d(x, w[f"{name}.weight"])
        elif kind == "EluAct":
            out = kernels.elu(x)
        elif kind == "AvgPool2D":
            out = kernels.avg_pool(x, layer.pool[1])
        elif kind == "Dropout":
            out = x
        elif kind == "SeparableConv2D":
            out = kernels.separable_conv2d(x, w[f"{name}.depthwise"], w[f"{name}.pointwise"])
        elif kind == "CausalConv1D":
            out = kernels.causal_conv1d(
                _as_2d(x), w[f"{name}.weight"], w[f"{name}.bias"], layer.dilation)
        elif kind == "PointwiseConv1D":
            out = kernels.causal_conv1d(_as_2d(x), w[f"{name}.weight"], w[f"{name}.bias"], 1)
        elif kind == "Add":
            main, skip = add_inputs(graph, i)
            out = _as_2d(buffers[main + 1]) + _as_2d(buffers[skip + 1])
        elif kind == "SliceLastTimestep":
            out = np.ascontiguousarray(x[:, -1])
        elif kind == "Flatten":
            out = x.reshape(-1)
        elif kind == "Dense":
            out = kernels.dense(x, w[f"{name}.weight"], w[f"{name}.bias"])
        elif kind == "SoftmaxAct":
            out = kernels.softmax(x)
        else:
            raise ValueError(f"cannot execute layer kind {kind!r}")
        if transform is not None:
            out = transform(i + 1, kind, out)
        if not np.isfinite(out).all():
            raise NonFiniteError(f"non-finite values in output of {name} ({kind})")
        buffers.append(out)
    return buffers


def forward(graph: LayerGraph, store: WeightStore, trial: np.ndarray) -> np.ndarray:
    """Class probability vector for one (C, T) trial."""
    require_valid(graph)
    return run_layers(graph, store, trial)[-1]


def predict_batch(
    graph: LayerGraph,
    store: WeightStore,
    trials: TrialSet,
    stats: StandardizationStats | None = None,
    workers: int = 1,
) -> list[tuple[int, np.ndarray]]:
    """Per-trial (predicted class, probability vector), in input order.

    ``workers > 1`` evaluates trials concurrently; results are ordered
    by input position, never by completion, and are bit-identical to a
    sequential run because trials share nothing but read-only weights.
    """
    require_valid(graph)
    data = trials.data
    if stats is not None:
        data = apply_standardization(data, stats)

    def one(i: int) -> tuple[int, np.ndarray]:
        probs = run_layers(graph, store, data[i])[-1]
        return int(np.argmax(probs)), probs

    if workers <= 1:
        return [one(i) for i in range(trials.n_trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials.n_trials)))
