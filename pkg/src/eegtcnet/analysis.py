"""Static cost accounting over a LayerGraph.

Counting conventions (they reproduce the published totals exactly):

* parameters include the four batch-norm tensors per channel (gamma,
  beta, moving mean, moving variance); front-end convolutions carry no
  bias, TCN convolutions, 1x1 projections and the dense head do;
* MACs follow the per-kind product formulas below, with bias adds and
  everything that is not a convolution or dense map counted as zero;
* peak memory assumes layer-by-layer inference with one distinct output
  buffer per layer (no fusion): the result is the largest sum of two
  consecutive buffers, the network input being buffer 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import LayerGraph, LayerSpec, build_eeg_tcnet, build_eegnet, receptive_field_size, require_valid
from .hyperparams import FAMILIES, HyperParams


@dataclass(frozen=True)
class LayerCost:
    name: str
    kind: str
    params: int
    macs: int
    out_bytes: int
    out_shape: tuple[int, ...]


@dataclass(frozen=True)
class CostReport:
    family: str
    params: int
    macs: int
    peak_memory_bytes: int
    rfs: int | None
    input_bytes: int
    per_layer: tuple[LayerCost, ...]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "macs": self.macs,
            "peak_memory_bytes": self.peak_memory_bytes,
            "rfs": self.rfs,
            "input_bytes": self.input_bytes,
            "per_layer": [
                {
                    "name": c.name,
                    "kind": c.kind,
                    "params": c.params,
                    "macs": c.macs,
                    "out_bytes": c.out_bytes,
                    "out_shape": list(c.out_shape),
                }
                for c in self.per_layer
            ],
        }


def _in_shape(graph: LayerGraph, layer: LayerSpec) -> tuple[int, ...]:
    i = layer.input_index
    return graph.input_shape if i < 0 else graph.layers[i].out_shape


def layer_params(graph: LayerGraph, index: int) -> int:
    layer = graph.layers[index]
    kind = layer.kind
    in_shape = _in_shape(graph, layer)
    if kind == "Conv2DSame":
        k1, k2 = layer.kernel
        return k1 * k2 * in_shape[0] * layer.filters
    if kind == "DepthwiseConv2D":
        k1, k2 = layer.kernel
        return k1 * k2 * in_shape[0] * layer.depth_multiplier
    if kind == "SeparableConv2D":
        k1, k2 = layer.kernel
        return k1 * k2 * in_shape[0] + in_shape[0] * layer.filters
    if kind == "CausalConv1D":
        return layer.kernel * in_shape[0] * layer.filters + layer.filters
    if kind == "PointwiseConv1D":
        return in_shape[0] * layer.filters + layer.filters
    if kind == "Dense":
        return in_shape[0] * layer.units + layer.units
    if kind == "BatchNorm":
        return 4 * layer.out_shape[0]
    return 0


def layer_macs(graph: LayerGraph, index: int) -> int:
    layer = graph.layers[index]
    kind = layer.kind
    in_shape = _in_shape(graph, layer)
    if kind == "Conv2DSame":
        k1, k2 = layer.kernel
        _, hout, wout = layer.out_shape
        return k1 * k2 * in_shape[0] * layer.filters * hout * wout
    if kind == "DepthwiseConv2D":
        k1, k2 = layer.kernel
        _, hout, wout = layer.out_shape
        return k1 * k2 * in_shape[0] * layer.depth_multiplier * hout * wout
    if kind == "SeparableConv2D":
        k1, k2 = layer.kernel
        _, hout, wout = layer.out_shape
        return (k1 * k2 + layer.filters) * in_shape[0] * hout * wout
    if kind == "CausalConv1D":
        return layer.kernel * in_shape[0] * layer.filters * layer.out_shape[-1]
    if kind == "PointwiseConv1D":
        return in_shape[0] * layer.filters * layer.out_shape[-1]
    if kind == "Dense":
        return in_shape[0] * layer.units
    return 0


def count_params(graph: LayerGraph) -> int:
    require_valid(graph)
    return sum(layer_params(graph, i) for i in range(len(graph.layers)))


def count_macs(graph: LayerGraph) -> int:
    require_valid(graph)
    return sum(layer_macs(graph, i) for i in range(len(graph.layers)))


def peak_memory_bytes(graph: LayerGraph, bytes_per_element: int = 1) -> int:
    """Largest sum of two consecutive output buffers, input included."""
    require_valid(graph)
    sizes = [math.prod(graph.input_shape)]
    sizes += [math.prod(l.out_shape) for l in graph.layers]
    peak = max(sizes[i] + sizes[i + 1] for i in range(len(sizes) - 1))
    return peak * bytes_per_element


def report(hp: HyperParams, family: str = "eeg_tcnet", bytes_per_element: int = 1) -> CostReport:
    """Build the family's graph and run every counter on it."""
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    graph = build_eeg_tcnet(hp) if family == "eeg_tcnet" else build_eegnet(hp)
    require_valid(graph)
    per_layer = tuple(
        LayerCost(
            name=graph.layer_name(i),
            kind=layer.kind,
            params=layer_params(graph, i),
            macs=layer_macs(graph, i),
            out_bytes=math.prod(layer.out_shape) * bytes_per_element,
            out_shape=layer.out_shape,
        )
        for i, layer in enumerate(graph.layers)
    )
    return CostReport(
        family=family,
        params=sum(c.params for c in per_layer),
        macs=sum(c.macs for c in per_layer),
        peak_memory_bytes=peak_memory_bytes(graph, bytes_per_element),
        rfs=receptive_field_size(hp.K_T, hp.L) if family == "eeg_tcnet" else None,
        input_bytes=math.prod(graph.input_shape) * bytes_per_element,
        per_layer=per_layer,
    )


def render_report(rep: CostReport) -> str:
    """Aligned text table plus the headline totals as key=value lines."""
    lines = [
        f"family={rep.family}",
        f"params={rep.params}",
        f"macs={rep.macs}",
        f"peak_memory_bytes={rep.peak_memory_bytes}",
        f"rfs={rep.rfs if rep.rfs is not None else '-'}",
        "",
        f"{'layer':<6}{'kind':<18}{'params':>8}{'macs':>10}{'out_bytes':>11}  out_shape",
        f"{'input':<6}{'-':<18}{0:>8}{0:>10}{rep.input_bytes:>11}  -",
    ]
    for c in rep.per_layer:
        shape = "x".join(str(d) for d in c.out_shape)
        lines.append(f"{c.name:<6}{c.kind:<18}{c.params:>8}{c.macs:>10}{c.out_bytes:>11}  {shape}")
    return "\n".join(lines)
