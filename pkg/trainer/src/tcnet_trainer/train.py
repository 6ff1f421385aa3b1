"""Training loop and weight export.

The default recipe: 750 epochs of Adam at learning rate 0.001, batch
size 64, categorical cross-entropy, uniform fan-in initialization,
dropout active.  Any override is recorded in the exported container's
metadata so downstream consumers can see what was actually run.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .formats import decode_trials, encode_weights, write_atomic
from .hyperparams import HyperParams
from .model import EEGClassifier


@dataclass
class TrainingConfig:
    epochs: int = 750
    learning_rate: float = 0.001
    batch_size: int = 64
    seed: int = 0
    device: str = "cpu"

    def overrides(self) -> dict:
        defaults = TrainingConfig()
        return {k: v for k, v in asdict(self).items()
                if v != getattr(defaults, k) and k != "device"}


@dataclass
class StandardizationStats:
    mean: np.ndarray
    std: np.ndarray

    def apply(self, data: np.ndarray) -> np.ndarray:
        out = (data.astype(np.float64) - self.mean[None, :, None]) / self.std[None, :, None]
        return out.astype(np.float32)

    def save(self, path) -> None:
        doc = {"mean": self.mean.tolist(), "std": self.std.tolist()}
        write_atomic(Path(path), json.dumps(doc).encode("utf-8"))


def fit_standardization(data: np.ndarray) -> StandardizationStats:
    x = data.astype(np.float64)
    return StandardizationStats(x.mean(axis=(0, 2)),
                                np.maximum(x.std(axis=(0, 2)), 1e-8))


class DivergenceError(RuntimeError):
    """Loss went non-finite; carries the epoch it happened in."""

    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"non-finite loss at epoch {epoch}")


def train_model(
    hp: HyperParams,
    data: np.ndarray,
    labels: np.ndarray,
    config: TrainingConfig | None = None,
    family: str = "eeg_tcnet",
    stats: StandardizationStats | None = None,
) -> tuple[EEGClassifier, dict]:
    """Train on (n, C, T) float32 trials; returns (model, history).

    ``stats`` overrides the standardization statistics; by default they
    are fitted on the training data when the configuration asks for
    standardization.
    """
    config = config or TrainingConfig()
    torch.manual_seed(config.seed)
    if hp.standardize:
        stats = stats or fit_standardization(data)
        data = stats.apply(data)
    model = EEGClassifier(hp, family).to(config.device)
    x = torch.from_numpy(np.ascontiguousarray(data, np.float32)).unsqueeze(1)
    y = torch.from_numpy(np.asarray(labels, np.int64))
    x, y = x.to(config.device), y.to(config.device)

    opt = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    rng = np.random.default_rng(config.seed)
    history = {"loss": [], "accuracy": []}

    model.train()
    for epoch in range(config.epochs):
        order = rng.permutation(len(y))
        total, hits = 0.0, 0
        for start in range(0, len(order), config.batch_size):
            idx = torch.from_numpy(order[start:start + config.batch_size])
            logits = model(x[idx])
            loss = loss_fn(logits, y[idx])
            if not torch.isfinite(loss):
                raise DivergenceError(epoch)
            opt.zero_grad()
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
            hits += int((logits.argmax(dim=1) == y[idx]).sum())
        history["loss"].append(total / len(y))
        history["accuracy"].append(hits / len(y))
    model.eval()
    history["stats"] = stats
    return model, history


def predict(model: EEGClassifier, data: np.ndarray,
            stats: StandardizationStats | None = None) -> np.ndarray:
    """Argmax class per trial, eval mode (dropout off)."""
    if stats is not None:
        data = stats.apply(data)
    model.eval()
    with torch.no_grad():
        x = torch.from_numpy(np.ascontiguousarray(data, np.float32)).unsqueeze(1)
        return model(x).argmax(dim=1).numpy()


def export_weights(model: EEGClassifier, path, config: TrainingConfig | None = None) -> None:
    tensors = [(name, t.detach().cpu().numpy().astype(np.float32))
               for name, t in model.named_canonical_tensors()]
    training_meta = {"recipe": asdict(config or TrainingConfig())}
    blob = encode_weights(tensors, model.hp.to_dict(), model.family, training_meta)
    write_atomic(Path(path), blob)


def load_trials_file(path):
    return decode_trials(Path(path).read_bytes())
