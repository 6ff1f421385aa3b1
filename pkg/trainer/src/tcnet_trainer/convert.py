"""Session conversion: continuous recordings -> windowed ETRL trials.

Input is an NPZ document per recording session with:

    signals      (n_channels, n_samples) float; 22 EEG channels first,
                 trailing channels (eye electrodes) are discarded
    cue_samples  (n_trials,) int, cue onset positions
    labels       (n_trials,) int in 0..3
                 (0 left hand, 1 right hand, 2 feet, 3 tongue)
    artifacts    (n_trials,) bool, True = expert-marked artifact trial
    fs           scalar, must be 250

Windows run from 0.5 s before the cue to 4.0 s after it (1125 samples);
artifact trials are dropped.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .formats import encode_trials, write_atomic

FS = 250.0
PRE = 125          # 0.5 s
POST = 1000        # 4.0 s
WINDOW = PRE + POST
EEG_CHANNELS = 22
N_CLASSES = 4


def window_session(signals, cue_samples, labels, artifacts, fs):
    """(data (n, 22, 1125), labels) with artifact trials removed."""
    signals = np.asarray(signals)
    cue_samples = np.asarray(cue_samples, np.int64)
    labels = np.asarray(labels, np.int64)
    artifacts = np.asarray(artifacts, bool)
    if float(fs) != FS:
        raise ValueError(f"expected {FS:g} Hz recordings, got {float(fs):g}")
    if signals.ndim != 2 or signals.shape[0] < EEG_CHANNELS:
        raise ValueError(f"need (>= {EEG_CHANNELS} channels, samples), got {signals.shape}")
    if not (len(cue_samples) == len(labels) == len(artifacts)):
        raise ValueError("cue_samples, labels and artifacts must have equal lengths")
    if len(labels) and (labels.min() < 0 or labels.max() >= N_CLASSES):
        raise ValueError(f"labels must lie in 0..{N_CLASSES - 1}")
    eeg = signals[:EEG_CHANNELS]

    windows, kept = [], []
    for cue, label, bad in zip(cue_samples, labels, artifacts):
        if bad:
            continue
        start, stop = int(cue) - PRE, int(cue) + POST
        if start < 0 or stop > eeg.shape[1]:
            raise ValueError(f"cue at {cue} puts window [{start}, {stop}) out of range")
        windows.append(eeg[:, start:stop].astype(np.float32))
        kept.append(label)
    if not windows:
        raise ValueError("all trials were marked as artifacts; nothing to convert")
    return np.stack(windows), np.asarray(kept, np.int64)


def convert_session(npz_path, out_path) -> tuple[int, int]:
    """Convert one session file; returns (kept trials, dropped trials)."""
    doc = np.load(npz_path)
    for key in ("signals", "cue_samples", "labels", "artifacts", "fs"):
        if key not in doc:
            raise ValueError(f"{npz_path}: missing key {key!r}")
    data, labels = window_session(doc["signals"], doc["cue_samples"],
                                  doc["labels"], doc["artifacts"], float(doc["fs"]))
    write_atomic(Path(out_path), encode_trials(data, labels, FS, N_CLASSES))
    return len(labels), int(np.asarray(doc["artifacts"], bool).sum())
