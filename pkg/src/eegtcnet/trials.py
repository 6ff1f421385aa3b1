"""Labeled trial sets and the ETRL binary container.

ETRL layout (little-endian):

    magic       4 bytes  ASCII "ETRL"
    version     u32      currently 1
    n_trials    u32
    C           u16      channels
    T           u32      samples per trial
    fs          real32   sampling rate, Hz
    n_classes   u8
    labels      n_trials x u8
    data        n_trials * C * T real32, trial-major then channel then time
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadMagicError, FormatError, TruncatedPayloadError, VersionMismatchError

MAGIC = b"ETRL"
VERSION = 1

#: Trial window geometry at the native sampling rate: 0.5 s before the
#: cue through 4.0 s after it.
WINDOW_FS = 250.0
PRE_CUE_S = 0.5
POST_CUE_S = 4.0


@dataclass
class TrialSet:
    """n_trials x C x T float32 recordings with 0-based class labels."""

    data: np.ndarray
    labels: np.ndarray
    fs: float
    n_classes: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float32)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.data.ndim != 3:
            raise ValueError(f"data must be (n, C, T), got {self.data.shape}")
        if self.labels.shape != (self.data.shape[0],):
            raise ValueError(
                f"labels shape {self.labels.shape} does not match {self.data.shape[0]} trials")
        if self.fs <= 0:
            raise ValueError(f"sampling rate must be positive, got {self.fs}")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise ValueError(f"labels must lie in [0, {self.n_classes})")
        if not np.isfinite(self.data).all():
            raise ValueError("trial data contains NaN/Inf")

    @property
    def n_trials(self) -> int:
        return self.data.shape[0]

    @property
    def C(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> int:
        return self.data.shape[2]


def save_trials(trials: TrialSet) -> bytes:
    n, c, t = trials.data.shape
    if trials.n_classes > 255 or n > 0xFFFFFFFF or c > 0xFFFF:
        raise ValueError("trial set exceeds ETRL field ranges")
    out = bytearray()
    out += MAGIC
    out += struct.pack("<I", VERSION)
    out += struct.pack("<I", n)
    out += struct.pack("<H", c)
    out += struct.pack("<I", t)
    out += struct.pack("<f", trials.fs)
    out += struct.pack("<B", trials.n_classes)
    out += trials.labels.astype(np.uint8).tobytes()
    out += np.ascontiguousarray(trials.data, dtype="<f4").tobytes()
    return bytes(out)


def load_trials(data: bytes) -> TrialSet:
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError("not an ETRL container (bad magic)")
    need = 4 + 4 + 4 + 2 + 4 + 4 + 1
    if len(data) < need:
        raise TruncatedPayloadError("ETRL header truncated")
    version, n, c, t, fs, n_classes = struct.unpack("<IIHIfB", data[4:need])
    if version != VERSION:
        raise VersionMismatchError(f"unsupported ETRL version {version} (expected {VERSION})")
    pos = need
    total = pos + n + 4 * n * c * t
    if len(data) < total:
        raise TruncatedPayloadError(
            f"ETRL payload truncated ({len(data)} bytes, expected {total})")
    if len(data) > total:
        raise FormatError(f"{len(data) - total} unexpected trailing bytes")
    labels = np.frombuffer(data, dtype=np.uint8, count=n, offset=pos).astype(np.int64)
    values = np.frombuffer(data, dtype="<f4", count=n * c * t, offset=pos + n)
    if labels.size and labels.max() >= n_classes:
        raise FormatError(f"label {labels.max()} out of range for {n_classes} classes")
    arr = values.reshape(n, c, t).copy()
    if not np.isfinite(arr).all():
        raise FormatError("trial data contains NaN/Inf")
    return TrialSet(arr, labels, float(np.float32(fs)), int(n_classes))


def extract_window(raw: np.ndarray, cue_sample: int, fs: float = WINDOW_FS) -> np.ndarray:
    """Cut the classification window around a cue from a continuous
    multi-channel recording: [cue - 0.5 s, cue + 4.0 s) at 250 Hz."""
    raw = np.asarray(raw)
    if raw.ndim != 2:
        raise ValueError(f"recording must be (C, samples), got {raw.shape}")
    if fs != WINDOW_FS:
        raise ValueError(f"expected {WINDOW_FS:g} Hz data, got {fs:g} (no resampling here)")
    start = int(cue_sample - PRE_CUE_S * fs)
    stop = int(cue_sample + POST_CUE_S * fs)
    if start < 0 or stop > raw.shape[1]:
        raise ValueError(
            f"window [{start}, {stop}) outside recording of {raw.shape[1]} samples")
    return raw[:, start:stop].astype(np.float32)
