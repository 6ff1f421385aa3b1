"""Input validation helpers for array-shaped trial data."""

from __future__ import annotations

import numpy as np

from .errors import GeometryError


def check_trials_array(X, C: int | None = None, T: int | None = None) -> np.ndarray:
    """Coerce X to a finite float32 (n, C, T) array, checking geometry."""
    X = np.asarray(X, dtype=np.float32)
    if X.ndim != 3:
        raise ValueError(f"expected trials shaped (n, C, T), got {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("trial data contains NaN/Inf")
    n, c, t = X.shape
    if (C is not None and c != C) or (T is not None and t != T):
        raise GeometryError(
            f"trial geometry mismatch: expected C={C}, T={T}, found C={c}, T={t}")
    return X
