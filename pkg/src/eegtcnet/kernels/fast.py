"""Vectorized kernels used by the execution engine.

Reductions run in float64 (im2col + matmul or einsum) and are rounded
to float32 on output, so results are deterministic and within 1e-5
relative of the loop oracles in :mod:`.naive`.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _pad2d(x64: np.ndarray, k1: int, k2: int) -> np.ndarray:
    # Smaller pad on the left/top for even kernels; fixed tie-break so
    # weights are exchangeable across implementations.
    pt, pb = (k1 - 1) // 2, k1 // 2
    pl, pr = (k2 - 1) // 2, k2 // 2
    return np.pad(x64, ((0, 0), (pt, pb), (pl, pr)))


def conv2d_same(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    cin, h, wd = x.shape
    cout, cin2, k1, k2 = w.shape
    if cin2 != cin:
        raise ValueError(f"weight expects {cin2} input channels, tensor has {cin}")
    xp = _pad2d(x.astype(np.float64), k1, k2)
    win = sliding_window_view(xp, (k1, k2), axis=(1, 2))      # (cin, h, wd, k1, k2)
    cols = win.transpose(1, 2, 0, 3, 4).reshape(h * wd, cin * k1 * k2)
    out = cols @ w.astype(np.float64).reshape(cout, -1).T      # (h*wd, cout)
    return out.T.reshape(cout, h, wd).astype(np.float32)


def depthwise_conv2d(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    cin, ch, t = x.shape
    cin2, dm, kh, kw = w.shape
    if cin2 != cin:
        raise ValueError(f"weight expects {cin2} input channels, tensor has {cin}")
    if kh != ch or kw != 1:
        raise ValueError(f"kernel height {kh} must equal input height {ch} (width 1)")
    out = np.einsum("idc,ict->idt", w[:, :, :, 0].astype(np.float64), x.astype(np.float64))
    return out.reshape(cin * dm, 1, t).astype(np.float32)


def separable_conv2d(x: np.ndarray, dw: np.ndarray, pw: np.ndarray) -> np.ndarray:
    cin, h, wd = x.shape
    if h != 1:
        raise ValueError(f"expected height 1, got {x.shape}")
    k2 = dw.shape[3]
    if dw.shape != (cin, 1, 1, k2) or pw.shape[1] != cin:
        raise ValueError(f"stage shapes {dw.shape}/{pw.shape} do not fit input {x.shape}")
    xp = _pad2d(x.astype(np.float64), 1, k2)
    win = sliding_window_view(xp[:, 0, :], k2, axis=1)         # (cin, wd, k2)
    mid = np.einsum("iwk,ik->iw", win, dw[:, 0, 0, :].astype(np.float64))
    out = pw[:, :, 0, 0].astype(np.float64) @ mid              # (cout, wd)
    return out[:, None, :].astype(np.float32)


def causal_conv1d(x: np.ndarray, w: np.ndarray, b: np.ndarray, d: int = 1) -> np.ndarray:
    cin, wd = x.shape
    cout, cin2, k = w.shape
    if cin2 != cin:
        raise ValueError(f"weight expects {cin2} input channels, tensor has {cin}")
    if d < 1:
        raise ValueError(f"dilation must be >= 1, got {d}")
    xp = np.pad(x.astype(np.float64), ((0, 0), ((k - 1) * d, 0)))
    win = sliding_window_view(xp, (k - 1) * d + 1, axis=1)[:, :, ::d]   # (cin, wd, k)
    out = np.einsum("oik,itk->ot", w.astype(np.float64), win) + b.astype(np.float64)[:, None]
    return out.astype(np.float32)


def batchnorm_infer(x, gamma, beta, mean, var, eps: float = 1e-3) -> np.ndarray:
    c = x.shape[0]
    for p in (gamma, beta, mean, var):
        if p.shape != (c,):
            raise ValueError(f"parameter length {p.shape} != channel count {c}")
    s = gamma.astype(np.float64) / np.sqrt(var.astype(np.float64) + eps)
    shift = beta.astype(np.float64) - s * mean.astype(np.float64)
    expand = (c,) + (1,) * (x.ndim - 1)
    out = s.reshape(expand) * x.astype(np.float64) + shift.reshape(expand)
    return out.astype(np.float32)


def elu(x: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    x64 = x.astype(np.float64)
    return np.where(x64 > 0.0, x64, alpha * np.expm1(x64)).astype(np.float32)


def avg_pool(x: np.ndarray, k: int) -> np.ndarray:
    cin, h, wd = x.shape
    if k < 1:
        raise ValueError(f"pool width must be >= 1, got {k}")
    if wd < k:
        raise ValueError(f"input width {wd} shorter than pool width {k}")
    wo = wd // k
    trimmed = x[:, :, : wo * k].astype(np.float64).reshape(cin, h, wo, k)
    return (trimmed.sum(axis=3) / k).astype(np.float32)


def dense(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    (n,) = x.shape
    m, n2 = w.shape
    if n2 != n or b.shape != (m,):
        raise ValueError(f"dense shapes {w.shape}/{b.shape} do not fit input {x.shape}")
    return (w.astype(np.float64) @ x.astype(np.float64) + b.astype(np.float64)).astype(np.float32)


def softmax(x: np.ndarray) -> np.ndarray:
    z = x.astype(np.float64)
    z = np.exp(z - z.max())
    return (z / z.sum()).astype(np.float32)
