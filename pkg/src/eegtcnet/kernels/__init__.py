"""Numeric kernels for every layer kind.

Two implementations live side by side: :mod:`.naive` is the direct
loop-level definition of each operation and serves as the correctness
oracle; :mod:`.fast` is the vectorized path the engine actually runs.
The fast path re-exported here must match naive within 1e-5 relative on
randomized inputs (see the kernel test suite).
"""

from .fast import (
    avg_pool,
    batchnorm_infer,
    causal_conv1d,
    conv2d_same,
    dense,
    depthwise_conv2d,
    elu,
    separable_conv2d,
    softmax,
)
from . import fast, naive

__all__ = [
    "avg_pool", "batchnorm_infer", "causal_conv1d", "conv2d_same", "dense",
    "depthwise_conv2d", "elu", "separable_conv2d", "softmax", "fast", "naive",
]
