"""Hyperparameter vector and its JSON configuration document."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

#: Exact key set accepted in a configuration document.
CONFIG_FIELDS = (
    "F1", "F2", "K_E", "K_T", "L", "F_T",
    "p_e", "p_t", "standardize", "C", "T", "n_classes",
)

FAMILIES = ("eeg_tcnet", "eegnet")


@dataclass(frozen=True)
class HyperParams:
    """Full hyperparameter vector for both network families.

    Defaults are the global (subject-independent) configuration on
    22-channel, 1125-sample, 4-class trials.  ``F2=None`` resolves to
    ``2*F1``, the convention used throughout the tuned configurations.
    The TCN fields (K_T, L, F_T, p_t) are ignored by the plain-CNN
    family builder.
    """

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
        problems = []
        for name in ("F1", "F2", "K_E", "K_T", "L", "F_T", "C", "T", "n_classes"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                problems.append(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("p_e", "p_t"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0.0 <= v < 1.0:
                problems.append(f"{name} must lie in [0, 1), got {v!r}")
        if not isinstance(self.standardize, bool):
            problems.append(f"standardize must be a boolean, got {self.standardize!r}")
        if problems:
            raise ConfigError("; ".join(problems))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def hyperparams_from_dict(doc: dict) -> HyperParams:
    """Build a validated HyperParams from a plain mapping.

    Keys must come from CONFIG_FIELDS; unknown keys are rejected rather
    than ignored so that typos cannot silently fall back to defaults.
    """
    if not isinstance(doc, dict):
        raise ConfigError(f"configuration must be a JSON object, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(CONFIG_FIELDS))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    clean = {}
    for key, value in doc.items():
        if key == "F2" and value is None:
            continue
        if key in ("p_e", "p_t") and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        clean[key] = value
    return HyperParams(**clean)


def load_config(path: str | Path) -> HyperParams:
    """Read a UTF-8 JSON configuration document from disk."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return hyperparams_from_dict(doc)
