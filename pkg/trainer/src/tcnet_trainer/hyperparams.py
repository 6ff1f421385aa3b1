"""Hyperparameter vector; mirrors the engine's configuration document.

The trainer talks to the inference engine only through files, so it
carries its own copy of the schema: exactly these field names, unknown
keys rejected, F2 defaulting to 2*F1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

CONFIG_FIELDS = (
    "F1", "F2", "K_E", "K_T", "L", "F_T",
    "p_e", "p_t", "standardize", "C", "T", "n_classes",
)

FAMILIES = ("eeg_tcnet", "eegnet")


@dataclass(frozen=True)
class HyperParams:
    F1: int = 8
    F2: int | None = None
    K_E: int = 32
    K_T: int = 4
    L: int = 2
    F_T: int = 12
    p_e: float = 0.2
    p_t: float = 0.3
    standardize: bool = True
    C: int = 22
    T: int = 1125
    n_classes: int = 4

    def __post_init__(self):
        if self.F2 is None:
            object.__setattr__(self, "F2", 2 * self.F1)
        for name in ("F1", "F2", "K_E", "K_T", "L", "F_T", "C", "T", "n_classes"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("p_e", "p_t"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {v!r}")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def hyperparams_from_dict(doc: dict) -> HyperParams:
    unknown = sorted(set(doc) - set(CONFIG_FIELDS))
    if unknown:
        raise ValueError(f"unknown configuration keys: {', '.join(unknown)}")
    clean = {k: v for k, v in doc.items() if not (k == "F2" and v is None)}
    for k in ("p_e", "p_t"):
        if k in clean and isinstance(clean[k], int) and not isinstance(clean[k], bool):
            clean[k] = float(clean[k])
    return HyperParams(**clean)


def load_config(path) -> HyperParams:
    return hyperparams_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
