import subprocess
import sys

import numpy as np
import pytest


def make_toy(n, c, t, seed=0, n_classes=4, amplitude=3.0):
    """Separable synthetic trials: class y drives one channel with a
    strong oscillation on top of noise."""
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(n_classes), -(-n // n_classes))[:n]
    rng.shuffle(labels)
    ts = np.arange(t) / 250.0
    data = (0.5 * rng.standard_normal((n, c, t))).astype(np.float32)
    wave = (amplitude * np.sin(2 * np.pi * 12 * ts)).astype(np.float32)
    for i, y in enumerate(labels):
        data[i, (3 * y) % c] += wave
    return data, labels


def run_engine(*args):
    """Invoke the inference engine's CLI in a separate process."""
    proc = subprocess.run([sys.executable, "-m", "eegtcnet", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def toy_small():
    return make_toy(64, 4, 128, seed=0)
