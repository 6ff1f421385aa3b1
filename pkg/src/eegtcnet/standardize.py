"""Per-channel standardization fitted on training data only."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .trials import TrialSet

#: Channels that never vary would divide by ~0; their scale saturates here.
STD_FLOOR = 1e-8


@dataclass
class StandardizationStats:
    mean: np.ndarray  # (C,)
    std: np.ndarray   # (C,)

    def to_json(self) -> str:
        return json.dumps({"mean": self.mean.tolist(), "std": self.std.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "StandardizationStats":
        doc = json.loads(text)
        return cls(np.asarray(doc["mean"], np.float64), np.asarray(doc["std"], np.float64))

    def save(self, path):
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "StandardizationStats":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def fit_stats(data: np.ndarray) -> StandardizationStats:
    """Mean/std per channel over all trials and time points of (n, C, T)."""
    if data.ndim != 3 or data.shape[0] == 0:
        raise ValueError(f"need a non-empty (n, C, T) array, got {data.shape}")
    x = data.astype(np.float64)
    mean = x.mean(axis=(0, 2))
    std = np.maximum(x.std(axis=(0, 2)), STD_FLOOR)
    return StandardizationStats(mean, std)


def fit_standardization(train: TrialSet) -> StandardizationStats:
    return fit_stats(train.data)


def apply_standardization(x: np.ndarray, stats: StandardizationStats) -> np.ndarray:
    """(x - mean) / std per channel; works on (C, T) or (n, C, T)."""
    x = np.asarray(x)
    if x.ndim == 2:
        shaped = (slice(None), None)
    elif x.ndim == 3:
        shaped = (None, slice(None), None)
    else:
        raise ValueError(f"expected (C, T) or (n, C, T), got {x.shape}")
    out = (x.astype(np.float64) - stats.mean[shaped]) / stats.std[shaped]
    return out.astype(np.float32)
