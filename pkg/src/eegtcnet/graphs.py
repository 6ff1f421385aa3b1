"""Layer graphs for the TCN classifier family and its plain-CNN baseline.

A LayerGraph is an ordered list of LayerSpec entries plus residual
edges.  It is the single source of truth shared by the cost analyzer,
the weight store and the execution engine: all three derive layer
names, tensor shapes and buffer sizes from it.

Convention: the network input is *not* a list entry (the graph keeps
its shape separately), so layer 0 is the first convolution.  Parameter
names are derived from these zero-based positions (``L00.weight``,
``L01.gamma``, ...), which is what makes weight containers exchangeable
between independent producers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import GraphValidationError, ReceptiveFieldError, ShapeInferenceError
from .hyperparams import HyperParams

#: Marker for "reads the network input buffer".
NETWORK_INPUT = -1

KINDS = (
    "Conv2DSame", "BatchNorm", "DepthwiseConv2D", "EluAct", "AvgPool2D",
    "SeparableConv2D", "Dropout", "CausalConv1D", "PointwiseConv1D",
    "Add", "SliceLastTimestep", "Flatten", "Dense", "SoftmaxAct",
)

#: Layers of one residual block's main path, in order.
BLOCK_PATTERN = (
    "CausalConv1D", "BatchNorm", "EluAct", "Dropout",
    "CausalConv1D", "BatchNorm", "EluAct", "Dropout",
)


@dataclass(frozen=True)
class LayerSpec:
    """One layer: kind, kind-specific parameters, inferred output shape.

    ``input_index`` is the list position of the layer whose output this
    layer reads (NETWORK_INPUT for the raw input).  Add layers read a
    second buffer, recorded in the graph's residual_edges.
    """

    kind: str
    out_shape: tuple[int, ...]
    input_index: int
    filters: int | None = None
    kernel: tuple[int, int] | int | None = None
    pool: tuple[int, int] | None = None
    dilation: int | None = None
    rate: float | None = None
    depth_multiplier: int | None = None
    units: int | None = None


@dataclass(frozen=True)
class LayerGraph:
    input_shape: tuple[int, ...]
    layers: tuple[LayerSpec, ...]
    residual_edges: tuple[tuple[int, int], ...] = ()
    hp: HyperParams | None = None
    family: str = "custom"

    def layer_name(self, index: int) -> str:
        return f"L{index:02d}"


def receptive_field_size(K_T: int, L: int) -> int:
    """Input timesteps influencing one output timestep of an L-block
    dilated stack with kernel length K_T."""
    if K_T < 1 or L < 0:
        raise ValueError(f"need K_T >= 1 and L >= 0, got K_T={K_T}, L={L}")
    return 1 + 2 * (K_T - 1) * (2 ** L - 1)


def infer_layer_shape(layer: LayerSpec, in_shape: tuple[int, ...]) -> tuple[int, ...]:
    """Deterministic output shape of ``layer`` applied to ``in_shape``."""
    kind = layer.kind
    if kind == "Conv2DSame":
        cin, h, w = _expect_axes(kind, in_shape, 3)
        return (layer.filters, h, w)
    if kind == "DepthwiseConv2D":
        cin, h, w = _expect_axes(kind, in_shape, 3)
        k1, k2 = layer.kernel
        if k1 != h or k2 != 1:
            raise ShapeInferenceError(
                f"DepthwiseConv2D kernel {layer.kernel} must span the full "
                f"height of input {in_shape}")
        return (cin * layer.depth_multiplier, 1, w)
    if kind == "SeparableConv2D":
        cin, h, w = _expect_axes(kind, in_shape, 3)
        if h != 1:
            raise ShapeInferenceError(f"SeparableConv2D expects height 1, got {in_shape}")
        return (layer.filters, 1, w)
    if kind == "AvgPool2D":
        cin, h, w = _expect_axes(kind, in_shape, 3)
        k = layer.pool[1]
        if w < k:
            raise ShapeInferenceError(f"pool width {k} exceeds input width {w}")
        return (cin, h, w // k)
    if kind in ("BatchNorm", "EluAct", "Dropout", "SoftmaxAct"):
        return in_shape
    if kind in ("CausalConv1D", "PointwiseConv1D"):
        if len(in_shape) == 3:
            cin, h, w = in_shape
            if h != 1:
                raise ShapeInferenceError(f"{kind} expects (C, W) or (C, 1, W), got {in_shape}")
        elif len(in_shape) == 2:
            cin, w = in_shape
        else:
            raise ShapeInferenceError(f"{kind} expects 2 or 3 axes, got {in_shape}")
        return (layer.filters, w)
    if kind == "Add":
        return sequence_shape(in_shape)
    if kind == "SliceLastTimestep":
        cin, w = _expect_axes(kind, in_shape, 2)
        return (cin,)
    if kind == "Flatten":
        n = 1
        for d in in_shape:
            n *= d
        return (n,)
    if kind == "Dense":
        (n,) = _expect_axes(kind, in_shape, 1)
        return (layer.units,)
    raise ShapeInferenceError(f"unknown layer kind {kind!r}")


def _expect_axes(kind: str, shape: tuple[int, ...], n: int) -> tuple[int, ...]:
    if len(shape) != n:
        raise ShapeInferenceError(f"{kind} expects {n} axes, got shape {shape}")
    return shape


def sequence_shape(shape: tuple[int, ...]) -> tuple[int, ...]:
    """(C, 1, W) and (C, W) are the same sequence; drop the unit height."""
    if len(shape) == 3 and shape[1] == 1:
        return (shape[0], shape[2])
    return shape


class _Builder:
    def __init__(self, input_shape):
        self.input_shape = tuple(input_shape)
        self.layers: list[LayerSpec] = []
        self.edges: list[tuple[int, int]] = []

    def shape_of(self, index: int) -> tuple[int, ...]:
        return self.input_shape if index == NETWORK_INPUT else self.layers[index].out_shape

    def add(self, kind: str, input_index: int | None = None, **cfg) -> int:
        src = len(self.layers) - 1 if input_index is None else input_index
        probe = LayerSpec(kind=kind, out_shape=(), input_index=src, **cfg)
        shape = infer_layer_shape(probe, self.shape_of(src))
        self.layers.append(replace(probe, out_shape=shape))
        return len(self.layers) - 1


def _front_end(b: _Builder, hp: HyperParams) -> None:
    """Temporal conv + spatial depthwise + separable summary, two 8x pools."""
    b.add("Conv2DSame", filters=hp.F1, kernel=(1, hp.K_E))
    b.add("BatchNorm")
    b.add("DepthwiseConv2D", kernel=(hp.C, 1), depth_multiplier=2)
    b.add("BatchNorm")
    b.add("EluAct")
    b.add("AvgPool2D", pool=(1, 8))
    b.add("Dropout", rate=hp.p_e)
    b.add("SeparableConv2D", filters=hp.F2, kernel=(1, 16))
    b.add("BatchNorm")
    b.add("EluAct")
    b.add("AvgPool2D", pool=(1, 8))
    b.add("Dropout", rate=hp.p_e)


def build_eeg_tcnet(hp: HyperParams) -> LayerGraph:
    """Graph of the TCN classifier: CNN front-end, L residual blocks of
    dilated causal convolutions, last-timestep readout.

    Raises ReceptiveFieldError when the dilated stack cannot see the
    whole pooled sequence, and ShapeInferenceError when C or T are
    incompatible with the kernel/pool geometry.
    """
    pooled = (hp.T // 8) // 8
    if pooled < 1:
        raise ShapeInferenceError(f"T={hp.T} pools down to zero timesteps")
    rfs = receptive_field_size(hp.K_T, hp.L)
    if rfs < pooled:
        raise ReceptiveFieldError(
            f"receptive field {rfs} (K_T={hp.K_T}, L={hp.L}) does not cover "
            f"the pooled sequence length {pooled}; deepen the stack or widen the kernel")

    b = _Builder((1, hp.C, hp.T))
    _front_end(b, hp)
    for i in range(hp.L):
        block_input = len(b.layers) - 1
        in_depth = b.shape_of(block_input)[0]
        b.add("CausalConv1D", filters=hp.F_T, kernel=hp.K_T, dilation=2 ** i)
        b.add("BatchNorm")
        b.add("EluAct")
        b.add("Dropout", rate=hp.p_t)
        b.add("CausalConv1D", filters=hp.F_T, kernel=hp.K_T, dilation=2 ** i)
        b.add("BatchNorm")
        b.add("EluAct")
        main_end = b.add("Dropout", rate=hp.p_t)
        if in_depth != hp.F_T:
            skip_src = b.add("PointwiseConv1D", filters=hp.F_T, input_index=block_input)
        else:
            skip_src = block_input
        add_idx = b.add("Add", input_index=main_end)
        b.edges.append((skip_src, add_idx))
    b.add("SliceLastTimestep")
    b.add("Dense", units=hp.n_classes)
    b.add("SoftmaxAct")
    return LayerGraph(b.input_shape, tuple(b.layers), tuple(b.edges), hp, "eeg_tcnet")


def build_eegnet(hp: HyperParams) -> LayerGraph:
    """Graph of the plain-CNN baseline: same front-end, flattened dense
    readout, no TCN (K_T, L, F_T, p_t unused)."""
    if (hp.T // 8) // 8 < 1:
        raise ShapeInferenceError(f"T={hp.T} pools down to zero timesteps")
    b = _Builder((1, hp.C, hp.T))
    _front_end(b, hp)
    b.add("Flatten")
    b.add("Dense", units=hp.n_classes)
    b.add("SoftmaxAct")
    return LayerGraph(b.input_shape, tuple(b.layers), (), hp, "eegnet")


def add_inputs(graph: LayerGraph, index: int) -> tuple[int, int]:
    """(main, skip) buffer indices feeding the Add layer at ``index``."""
    skips = [s for s, a in graph.residual_edges if a == index]
    if len(skips) != 1:
        raise GraphValidationError(
            [f"{graph.layer_name(index)} (Add) must have exactly one residual edge, found {len(skips)}"])
    return graph.layers[index].input_index, skips[0]


def validate(graph: LayerGraph) -> list[str]:
    """Check topology, shape consistency, residual-edge legality and the
    dilation schedule; returns human-readable diagnostics (empty = ok)."""
    diags: list[str] = []
    layers = graph.layers
    if not layers:
        return ["graph has no layers"]

    def shape_of(idx, shapes):
        return graph.input_shape if idx == NETWORK_INPUT else shapes[idx]

    # Topological order + shape inference.
    shapes: list[tuple[int, ...] | None] = [None] * len(layers)
    for i, layer in enumerate(layers):
        name = graph.layer_name(i)
        if layer.kind not in KINDS:
            diags.append(f"{name}: unknown kind {layer.kind!r}")
            shapes[i] = layer.out_shape
            continue
        if not (NETWORK_INPUT <= layer.input_index < i):
            diags.append(f"{name}: input_index {layer.input_index} breaks topological order")
            shapes[i] = layer.out_shape
            continue
        in_shape = shape_of(layer.input_index, shapes)
        try:
            inferred = infer_layer_shape(layer, in_shape)
        except ShapeInferenceError as exc:
            diags.append(f"{name}: {exc}")
            shapes[i] = layer.out_shape
            continue
        shapes[i] = inferred
        if layer.out_shape != inferred:
            diags.append(
                f"{name}: declared shape {layer.out_shape} differs from inferred {inferred}")

    # Residual edges and Add legality.
    add_positions = [i for i, l in enumerate(layers) if l.kind == "Add"]
    edge_targets = [a for _, a in graph.residual_edges]
    for s, a in graph.residual_edges:
        if not (0 <= a < len(layers)) or layers[a].kind != "Add":
            diags.append(f"residual edge ({s}, {a}) does not target an Add layer")
            continue
        if not (NETWORK_INPUT <= s < a):
            diags.append(f"residual edge ({s}, {a}) breaks topological order")
    for i in add_positions:
        name = graph.layer_name(i)
        skips = [s for s, a in graph.residual_edges if a == i]
        if len(skips) != 1:
            diags.append(f"{name} (Add): needs exactly one residual edge, found {len(skips)}")
            continue
        skip = skips[0]
        if not (NETWORK_INPUT <= skip < i):
            continue
        main_shape = sequence_shape(shape_of(layers[i].input_index, shapes))
        skip_shape = sequence_shape(shape_of(skip, shapes))
        if main_shape and skip_shape and main_shape != skip_shape:
            if main_shape[0] != skip_shape[0]:
                diags.append(
                    f"{name} (Add): input depths {skip_shape[0]} and {main_shape[0]} "
                    f"differ and no projection is present")
            else:
                diags.append(f"{name} (Add): input shapes {skip_shape} vs {main_shape} differ")
            continue
        # The skip path may hop through one 1x1 projection; behind it the
        # main path must be exactly one residual block.
        origin = skip
        if skip != NETWORK_INPUT and layers[skip].kind == "PointwiseConv1D":
            origin = layers[skip].input_index
        main = [l.kind for j, l in enumerate(layers)
                if origin < j < i and l.kind != "PointwiseConv1D"]
        if tuple(main) != BLOCK_PATTERN:
            diags.append(f"{name} (Add): residual edge does not span exactly one block")

    # Dilation schedule: powers of two, equal within a block, doubling across.
    blocks: list[list[int]] = []
    for i, layer in enumerate(layers):
        if layer.kind == "CausalConv1D":
            d = layer.dilation or 1
            if d < 1 or d & (d - 1):
                diags.append(f"{graph.layer_name(i)}: non-power-of-two dilation {d}")
            new_block = not blocks or len(blocks[-1]) == 2 or i - 1 in edge_targets
            if new_block:
                blocks.append([d])
            else:
                blocks[-1].append(d)
    for bi, ds in enumerate(blocks):
        if any(d != ds[0] for d in ds):
            diags.append(f"block {bi}: convolutions disagree on dilation {ds}")
        elif ds[0] != 2 ** bi and not (ds[0] & (ds[0] - 1)):
            diags.append(f"block {bi}: dilation {ds[0]} off schedule (expected {2 ** bi})")

    # Classifier head.
    if graph.hp is not None and shapes[-1] is not None:
        if shapes[-1] != (graph.hp.n_classes,):
            diags.append(
                f"final output shape {shapes[-1]} != ({graph.hp.n_classes},)")
    return diags


def require_valid(graph: LayerGraph) -> LayerGraph:
    diags = validate(graph)
    if diags:
        raise GraphValidationError(diags)
    return graph
