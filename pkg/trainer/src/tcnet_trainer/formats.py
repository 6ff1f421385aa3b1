"""ETCW / ETRL serialization for the exchange with the inference engine.

Both containers are little-endian.  ETRL: magic "ETRL", version u32,
n_trials u32, C u16, T u32, fs f32, n_classes u8, labels (u8 each),
data as float32 trial-major.  ETCW: magic "ETCW", version u32, meta_len
u32, UTF-8 JSON meta (hyperparams, family, ordered manifest, plus a
"training" section with the recipe actually used), tensor_count u32,
then per tensor: name_len u16, name, dtype u8 (0 = float32), ndim u8,
dims u32 each, row-major payload.

Tensor names are canonical: zero-based layer index (input excluded),
dot, role -- e.g. L00.weight, L01.gamma.  Files are written atomically.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

ETRL_MAGIC = b"ETRL"
ETCW_MAGIC = b"ETCW"
VERSION = 1


def write_atomic(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def encode_trials(data: np.ndarray, labels: np.ndarray, fs: float, n_classes: int) -> bytes:
    n, c, t = data.shape
    out = bytearray()
    out += ETRL_MAGIC
    out += struct.pack("<IIHIfB", VERSION, n, c, t, fs, n_classes)
    out += np.asarray(labels, np.uint8).tobytes()
    out += np.ascontiguousarray(data, dtype="<f4").tobytes()
    return bytes(out)


def decode_trials(blob: bytes):
    if blob[:4] != ETRL_MAGIC:
        raise ValueError("not an ETRL container")
    version, n, c, t, fs, n_classes = struct.unpack("<IIHIfB", blob[4:23])
    if version != VERSION:
        raise ValueError(f"unsupported ETRL version {version}")
    labels = np.frombuffer(blob, np.uint8, n, 23).astype(np.int64)
    data = np.frombuffer(blob, "<f4", n * c * t, 23 + n).reshape(n, c, t).copy()
    return data, labels, float(np.float32(fs)), int(n_classes)


def encode_weights(named_tensors: list[tuple[str, np.ndarray]], hp_dict: dict,
                   family: str, training_meta: dict | None = None) -> bytes:
    manifest = [{"name": n, "dtype": 0, "dims": list(t.shape)} for n, t in named_tensors]
    meta = {"hyperparams": hp_dict, "family": family, "manifest": manifest}
    if training_meta:
        meta["training"] = training_meta
    meta_bytes = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")
    out = bytearray()
    out += ETCW_MAGIC
    out += struct.pack("<I", VERSION)
    out += struct.pack("<I", len(meta_bytes))
    out += meta_bytes
    out += struct.pack("<I", len(named_tensors))
    for name, tensor in named_tensors:
        enc = name.encode("utf-8")
        out += struct.pack("<H", len(enc))
        out += enc
        out += struct.pack("<BB", 0, tensor.ndim)
        for d in tensor.shape:
            out += struct.pack("<I", d)
        out += np.ascontiguousarray(tensor, dtype="<f4").tobytes()
    return bytes(out)


def decode_weights(blob: bytes):
    """(named tensors, meta); float32 containers only (all we export)."""
    if blob[:4] != ETCW_MAGIC:
        raise ValueError("not an ETCW container")
    version, meta_len = struct.unpack("<II", blob[4:12])
    if version != VERSION:
        raise ValueError(f"unsupported ETCW version {version}")
    pos = 12
    meta = json.loads(blob[pos:pos + meta_len].decode("utf-8"))
    pos += meta_len
    (count,) = struct.unpack("<I", blob[pos:pos + 4])
    pos += 4
    tensors = []
    for _ in range(count):
        (name_len,) = struct.unpack("<H", blob[pos:pos + 2])
        pos += 2
        name = blob[pos:pos + name_len].decode("utf-8")
        pos += name_len
        dtype, ndim = blob[pos], blob[pos + 1]
        pos += 2
        dims = struct.unpack(f"<{ndim}I", blob[pos:pos + 4 * ndim])
        pos += 4 * ndim
        if dtype != 0:
            raise ValueError(f"{name}: unexpected dtype code {dtype}")
        n = int(np.prod(dims)) if dims else 1
        tensors.append((name, np.frombuffer(blob, "<f4", n, pos).reshape(dims).copy()))
        pos += 4 * n
    if pos != len(blob):
        raise ValueError("trailing bytes in container")
    return tensors, meta
