"""Named weight collections and the ETCW binary container.

ETCW layout (all multi-byte integers little-endian):

    magic           4 bytes  ASCII "ETCW"
    version         u32      currently 1
    meta_len        u32
    meta            UTF-8 JSON: hyperparams, family, ordered tensor
                    manifest (and, for quantized stores, the activation
                    calibration under "activation_quant")
    tensor_count    u32
    per tensor:
        name_len    u16
        name        UTF-8
        dtype       u8       0 = real32; 1 = int8 codes followed by a
                             trailing real32 scale and i32 zero-point
        ndim        u8
        dims        u32 each
        payload     row-major

Saving is canonical (sorted-key compact JSON, tensors in graph order),
so save -> load -> save is byte-identical.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagicError,
    FormatError,
    MissingParameterError,
    TensorShapeError,
    TruncatedPayloadError,
    UnknownTensorError,
    VersionMismatchError,
)
from .graphs import LayerGraph, build_eeg_tcnet, build_eegnet
from .hyperparams import FAMILIES, HyperParams, hyperparams_from_dict

MAGIC = b"ETCW"
VERSION = 1
DTYPE_REAL32 = 0
DTYPE_INT8 = 1

# Per-kind parameter roles, in canonical order.
_ROLES = {
    "Conv2DSame": ("weight",),
    "DepthwiseConv2D": ("weight",),
    "SeparableConv2D": ("depthwise", "pointwise"),
    "BatchNorm": ("gamma", "beta", "mean", "var"),
    "CausalConv1D": ("weight", "bias"),
    "PointwiseConv1D": ("weight", "bias"),
    "Dense": ("weight", "bias"),
}


def graph_for(hp: HyperParams, family: str) -> LayerGraph:
    if family not in FAMILIES:
        raise FormatError(f"unknown family {family!r}")
    return build_eeg_tcnet(hp) if family == "eeg_tcnet" else build_eegnet(hp)


def parameter_spec(graph: LayerGraph) -> dict[str, tuple[int, ...]]:
    """Canonical name -> dims for every learned tensor of the graph."""
    spec: dict[str, tuple[int, ...]] = {}
    for i, layer in enumerate(graph.layers):
        roles = _ROLES.get(layer.kind)
        if not roles:
            continue
        name = graph.layer_name(i)
        in_depth = (graph.input_shape if layer.input_index < 0
                    else graph.layers[layer.input_index].out_shape)[0]
        for role in roles:
            spec[f"{name}.{role}"] = _role_dims(layer, role, in_depth)
    return spec


def _role_dims(layer, role, in_depth) -> tuple[int, ...]:
    kind = layer.kind
    if kind == "Conv2DSame":
        return (layer.filters, in_depth, *layer.kernel)
    if kind == "DepthwiseConv2D":
        return (in_depth, layer.depth_multiplier, *layer.kernel)
    if kind == "SeparableConv2D":
        if role == "depthwise":
            return (in_depth, 1, *layer.kernel)
        return (layer.filters, in_depth, 1, 1)
    if kind == "BatchNorm":
        return (layer.out_shape[0],)
    if kind == "CausalConv1D":
        return (layer.filters, in_depth, layer.kernel) if role == "weight" else (layer.filters,)
    if kind == "PointwiseConv1D":
        return (layer.filters, in_depth, 1) if role == "weight" else (layer.filters,)
    if kind == "Dense":
        return (layer.units, in_depth) if role == "weight" else (layer.units,)
    raise KeyError(kind)


@dataclass
class WeightStore:
    """Float32 tensors keyed by canonical name, plus the declaring metadata."""

    entries: dict[str, np.ndarray]
    hp: HyperParams
    family: str
    extra_meta: dict = field(default_factory=dict)

    def graph(self) -> LayerGraph:
        return graph_for(self.hp, self.family)

    def element_count(self) -> int:
        return sum(int(v.size) for v in self.entries.values())


@dataclass
class QuantizedWeightStore:
    """Int8 codes with per-tensor symmetric scales (zero-point 0) and,
    when calibrated, per-buffer activation grids."""

    codes: dict[str, np.ndarray]
    scales: dict[str, float]
    zero_points: dict[str, int]
    hp: HyperParams
    family: str
    activation_quant: list[tuple[float, int]] | None = None
    extra_meta: dict = field(default_factory=dict)

    def graph(self) -> LayerGraph:
        return graph_for(self.hp, self.family)

    def dequantized(self) -> WeightStore:
        entries = {
            name: (codes.astype(np.float64) * self.scales[name]).astype(np.float32)
            for name, codes in self.codes.items()
        }
        return WeightStore(entries, self.hp, self.family, dict(self.extra_meta))


def _check_against_graph(names_dims: dict[str, tuple[int, ...]], graph: LayerGraph) -> None:
    spec = parameter_spec(graph)
    for name in names_dims:
        if name not in spec:
            raise UnknownTensorError(f"unknown tensor name {name!r} for this graph")
    for name, dims in spec.items():
        if name not in names_dims:
            raise MissingParameterError(f"missing parameter {name!r}")
        if tuple(names_dims[name]) != dims:
            raise TensorShapeError(
                f"{name}: dims {tuple(names_dims[name])} do not match expected {dims}")


def validate_store(store: WeightStore | QuantizedWeightStore) -> None:
    tensors = store.entries if isinstance(store, WeightStore) else store.codes
    _check_against_graph({n: t.shape for n, t in tensors.items()}, store.graph())


def random_weights(graph: LayerGraph, rng: np.random.Generator | None = None) -> WeightStore:
    """Store with fan-in-scaled random weights; handy for tests and demos."""
    rng = rng or np.random.default_rng(0)
    entries: dict[str, np.ndarray] = {}
    for name, dims in parameter_spec(graph).items():
        role = name.split(".", 1)[1]
        if role == "bias":
            t = np.zeros(dims, np.float32)
        elif role == "gamma":
            t = (1.0 + 0.1 * rng.standard_normal(dims)).astype(np.float32)
        elif role == "beta":
            t = (0.1 * rng.standard_normal(dims)).astype(np.float32)
        elif role == "mean":
            t = (0.1 * rng.standard_normal(dims)).astype(np.float32)
        elif role == "var":
            t = rng.uniform(0.5, 1.5, dims).astype(np.float32)
        else:
            fan_in = max(1, int(np.prod(dims[1:])) if len(dims) > 1 else dims[0])
            t = (rng.standard_normal(dims) / np.sqrt(fan_in)).astype(np.float32)
        entries[name] = t
    return WeightStore(entries, graph.hp, graph.family)


# --- serialization -------------------------------------------------------

def _canonical_meta(store) -> bytes:
    if isinstance(store, WeightStore):
        manifest = [
            {"name": n, "dtype": DTYPE_REAL32, "dims": list(t.shape)}
            for n, t in store.entries.items()
        ]
    else:
        manifest = [
            {"name": n, "dtype": DTYPE_INT8, "dims": list(t.shape)}
            for n, t in store.codes.items()
        ]
    meta = dict(store.extra_meta)
    meta["hyperparams"] = store.hp.to_dict()
    meta["family"] = store.family
    meta["manifest"] = manifest
    if isinstance(store, QuantizedWeightStore) and store.activation_quant is not None:
        meta["activation_quant"] = [
            {"buffer": i, "scale": s, "zero_point": z}
            for i, (s, z) in enumerate(store.activation_quant)
        ]
    return json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_weights(store: WeightStore | QuantizedWeightStore) -> bytes:
    validate_store(store)
    quant = isinstance(store, QuantizedWeightStore)
    raw = store.codes if quant else store.entries
    tensors = {n: raw[n] for n in parameter_spec(store.graph())}  # canonical order
    if quant:
        store = QuantizedWeightStore(tensors, store.scales, store.zero_points, store.hp,
                                     store.family, store.activation_quant, store.extra_meta)
    else:
        store = WeightStore(tensors, store.hp, store.family, store.extra_meta)
    meta = _canonical_meta(store)
    out = bytearray()
    out += MAGIC
    out += struct.pack("<I", VERSION)
    out += struct.pack("<I", len(meta))
    out += meta
    out += struct.pack("<I", len(tensors))
    for name, t in tensors.items():
        enc = name.encode("utf-8")
        out += struct.pack("<H", len(enc))
        out += enc
        out += struct.pack("<BB", DTYPE_INT8 if quant else DTYPE_REAL32, t.ndim)
        for d in t.shape:
            out += struct.pack("<I", d)
        if quant:
            out += np.ascontiguousarray(t, dtype=np.int8).tobytes()
            out += struct.pack("<f", store.scales[name])
            out += struct.pack("<i", store.zero_points[name])
        else:
            out += np.ascontiguousarray(t, dtype="<f4").tobytes()
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedPayloadError(
                f"container truncated at byte {self.pos} (needed {n} more)")
        chunk = self.data[self.pos: self.pos + n]
        self.pos += n
        return chunk

    def u8(self):
        return self.take(1)[0]

    def u16(self):
        return struct.unpack("<H", self.take(2))[0]

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def i32(self):
        return struct.unpack("<i", self.take(4))[0]

    def f32(self):
        return struct.unpack("<f", self.take(4))[0]

    def done(self):
        if self.pos != len(self.data):
            raise FormatError(f"{len(self.data) - self.pos} unexpected trailing bytes")


def load_weights(data: bytes) -> WeightStore | QuantizedWeightStore:
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise BadMagicError("not an ETCW container (bad magic)")
    version = r.u32()
    if version != VERSION:
        raise VersionMismatchError(f"unsupported ETCW version {version} (expected {VERSION})")
    meta_len = r.u32()
    try:
        meta = json.loads(r.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"metadata is not valid UTF-8 JSON: {exc}") from exc
    for key in ("hyperparams", "family", "manifest"):
        if key not in meta:
            raise FormatError(f"metadata lacks required key {key!r}")
    hp = hyperparams_from_dict(meta["hyperparams"])
    family = meta["family"]
    if family not in FAMILIES:
        raise FormatError(f"unknown family {family!r}")

    count = r.u32()
    float_entries: dict[str, np.ndarray] = {}
    codes: dict[str, np.ndarray] = {}
    scales: dict[str, float] = {}
    zero_points: dict[str, int] = {}
    records = []
    for _ in range(count):
        name = r.take(r.u16()).decode("utf-8")
        dtype = r.u8()
        ndim = r.u8()
        dims = tuple(r.u32() for _ in range(ndim))
        n = 1
        for d in dims:
            n *= d
        if dtype == DTYPE_REAL32:
            t = np.frombuffer(r.take(4 * n), dtype="<f4").reshape(dims).copy()
            float_entries[name] = t
        elif dtype == DTYPE_INT8:
            t = np.frombuffer(r.take(n), dtype=np.int8).reshape(dims).copy()
            codes[name] = t
            scales[name] = r.f32()
            zero_points[name] = r.i32()
        else:
            raise FormatError(f"tensor {name!r}: unknown dtype code {dtype}")
        records.append({"name": name, "dtype": dtype, "dims": list(dims)})
    r.done()
    if records != meta["manifest"]:
        raise FormatError("metadata manifest does not match the tensor records")
    if float_entries and codes:
        raise FormatError("container mixes real32 and int8 tensors")

    extra = {k: v for k, v in meta.items()
             if k not in ("hyperparams", "family", "manifest", "activation_quant")}
    if codes:
        aq = None
        if "activation_quant" in meta:
            rows = sorted(meta["activation_quant"], key=lambda r: r["buffer"])
            aq = [(float(row["scale"]), int(row["zero_point"])) for row in rows]
        store = QuantizedWeightStore(codes, scales, zero_points, hp, family, aq, extra)
    else:
        store = WeightStore(float_entries, hp, family, extra)
    validate_store(store)
    return store
