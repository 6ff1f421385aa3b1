"""Direct loop implementations of every kernel; the correctness oracle.

Nothing here is vectorized on purpose.  Accumulation happens in Python
floats (64-bit), outputs are rounded to float32, mirroring the fast
path's reduction precision.
"""

from __future__ import annotations

import math

import numpy as np


def conv2d_same(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Zero-padded cross-correlation, pad split (K-1)//2 left / K//2 right."""
    cin, h, wd = x.shape
    cout, cin2, k1, k2 = w.shape
    if cin2 != cin:
        raise ValueError(f"weight expects {cin2} input channels, tensor has {cin}")
    pt, pl = (k1 - 1) // 2, (k2 - 1) // 2
    out = np.empty((cout, h, wd), np.float32)
    for o in range(cout):
        for r in range(h):
            for c in range(wd):
                acc = 0.0
                for i in range(cin):
                    for a in range(k1):
                        rr = r + a - pt
                        if rr < 0 or rr >= h:
                            continue
                        for bcol in range(k2):
                            cc = c + bcol - pl
                            if 0 <= cc < wd:
                                acc += float(w[o, i, a, bcol]) * float(x[i, rr, cc])
                out[o, r, c] = acc
    return out


def depthwise_conv2d(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Each input channel convolved with D full-height kernels; no padding."""
    cin, ch, t = x.shape
    cin2, dm, kh, kw = w.shape
    if cin2 != cin:
        raise ValueError(f"weight expects {cin2} input channels, tensor has {cin}")
    if kh != ch or kw != 1:
        raise ValueError(f"kernel height {kh} must equal input height {ch} (width 1)")
    out = np.empty((cin * dm, 1, t), np.float32)
    for i in range(cin):
        for d in range(dm):
            for tt in range(t):
                acc = 0.0
                for c in range(ch):
                    acc += float(w[i, d, c, 0]) * float(x[i, c, tt])
                out[i * dm + d, 0, tt] = acc
    return out


def separable_conv2d(x: np.ndarray, dw: np.ndarray, pw: np.ndarray) -> np.ndarray:
    """Per-channel temporal stage (same padding) then 1x1 channel mixing."""
    cin, h, wd = x.shape
    if h != 1:
        raise ValueError(f"expected height 1, got {x.shape}")
    k2 = dw.shape[3]
    cout = pw.shape[0]
    if dw.shape != (cin, 1, 1, k2) or pw.shape[1] != cin:
        raise ValueError(f"stage shapes {dw.shape}/{pw.shape} do not fit input {x.shape}")
    pl = (k2 - 1) // 2
    mid = np.empty((cin, 1, wd), np.float32)
    for i in range(cin):
        for c in range(wd):
            acc = 0.0
            for b in range(k2):
                cc = c + b - pl
                if 0 <= cc < wd:
                    acc += float(dw[i, 0, 0, b]) * float(x[i, 0, cc])
            mid[i, 0, c] = acc
    out = np.empty((cout, 1, wd), np.float32)
    for o in range(cout):
        for c in range(wd):
            acc = 0.0
            for i in range(cin):
                acc += float(pw[o, i, 0, 0]) * float(mid[i, 0, c])
            out[o, 0, c] = acc
    return out


def causal_conv1d(x: np.ndarray, w: np.ndarray, b: np.ndarray, d: int = 1) -> np.ndarray:
    """Dilated causal correlation: (K-1)*d zeros prepended, length kept."""
    cin, wd = x.shape
    cout, cin2, k = w.shape
    if cin2 != cin:
        raise ValueError(f"weight expects {cin2} input channels, tensor has {cin}")
    if d < 1:
        raise ValueError(f"dilation must be >= 1, got {d}")
    out = np.empty((cout, wd), np.float32)
    for o in range(cout):
        for t in range(wd):
            acc = float(b[o])
            for i in range(cin):
                for kk in range(k):
                    src = t - (k - 1 - kk) * d
                    if src >= 0:
                        acc += float(w[o, i, kk]) * float(x[i, src])
            out[o, t] = acc
    return out


def batchnorm_infer(x, gamma, beta, mean, var, eps: float = 1e-3) -> np.ndarray:
    c = x.shape[0]
    for p in (gamma, beta, mean, var):
        if p.shape != (c,):
            raise ValueError(f"parameter length {p.shape} != channel count {c}")
    out = np.empty_like(x, dtype=np.float32)
    flat_in = x.reshape(c, -1)
    flat_out = out.reshape(c, -1)
    for i in range(c):
        s = float(gamma[i]) / math.sqrt(float(var[i]) + eps)
        shift = float(beta[i]) - s * float(mean[i])
        for j in range(flat_in.shape[1]):
            flat_out[i, j] = s * float(flat_in[i, j]) + shift
    return out


def elu(x: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float32)
    flat_in, flat_out = x.reshape(-1), out.reshape(-1)
    for i in range(flat_in.shape[0]):
        v = float(flat_in[i])
        flat_out[i] = v if v > 0.0 else alpha * math.expm1(v)
    return out


def avg_pool(x: np.ndarray, k: int) -> np.ndarray:
    """Non-overlapping window means along the last axis, remainder dropped."""
    cin, h, wd = x.shape
    if k < 1:
        raise ValueError(f"pool width must be >= 1, got {k}")
    if wd < k:
        raise ValueError(f"input width {wd} shorter than pool width {k}")
    wo = wd // k
    out = np.empty((cin, h, wo), np.float32)
    for i in range(cin):
        for r in range(h):
            for c in range(wo):
                acc = 0.0
                for j in range(k):
                    acc += float(x[i, r, c * k + j])
                out[i, r, c] = acc / k
    return out


def dense(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    (n,) = x.shape
    m, n2 = w.shape
    if n2 != n or b.shape != (m,):
        raise ValueError(f"dense shapes {w.shape}/{b.shape} do not fit input {x.shape}")
    out = np.empty(m, np.float32)
    for o in range(m):
        acc = float(b[o])
        for i in range(n):
            acc += float(w[o, i]) * float(x[i])
        out[o] = acc
    return out


def softmax(x: np.ndarray) -> np.ndarray:
    hi = max(float(v) for v in x)
    exps = [math.exp(float(v) - hi) for v in x]
    total = sum(exps)
    return np.array([e / total for e in exps], np.float32)
