"""Cross-validated hyperparameter grid search over the training session.

The test session is not an input anywhere in this module: selection
sees only folds of the training data.  Candidates are scored by mean
validation accuracy; ties go to the smaller network, then to the
lexicographically smaller configuration.
"""

from __future__ import annotations

import dataclasses
from itertools import product

import numpy as np

from .hyperparams import HyperParams
from .model import EEGClassifier
from .train import TrainingConfig, predict, train_model

#: Candidate values observed across the tuned per-subject configurations.
SEARCH_SPACE = {
    "K_T": (3, 4),
    "L": (2, 3, 4),
    "F_T": (12, 15, 17, 20, 25),
    "F1": (8, 16, 32),
    "K_E": (32, 64, 128),
    "p_e": (0.0, 0.1, 0.2),
    "p_t": (0.2, 0.3),
    "standardize": (True, False),
}


def candidates(space: dict | None = None, base: HyperParams | None = None):
    """Every combination of the space, materialized over ``base``."""
    space = space or SEARCH_SPACE
    base = base or HyperParams()
    keys = list(space)
    for values in product(*(space[k] for k in keys)):
        fields = dict(zip(keys, values))
        if "F1" in fields and "F2" not in fields:
            fields["F2"] = 2 * fields["F1"]
        yield dataclasses.replace(base, **fields)


def _folds(n: int, k: int, seed: int):
    order = np.random.default_rng(seed).permutation(n)
    return [order[i::k] for i in range(k)]


def _sort_key(row: dict):
    hp = row["hp"]
    lex = tuple(hp[k] for k in sorted(hp))
    return (-row["mean_accuracy"], row["params"], lex)


def grid_search(
    hps,
    data: np.ndarray,
    labels: np.ndarray,
    folds: int = 4,
    config: TrainingConfig | None = None,
    family: str = "eeg_tcnet",
) -> tuple[HyperParams, list[dict]]:
    """Score each candidate with k-fold cross-validation.

    Returns the winning HyperParams and the full result table (one row
    per candidate: hp dict, per-fold accuracies, mean, parameter count,
    chosen flag).
    """
    hps = list(hps)
    if not hps:
        raise ValueError("no candidates to search over")
    config = config or TrainingConfig()
    splits = _folds(len(labels), folds, config.seed)
    rows = []
    for hp in hps:
        fold_acc = []
        for held_out in range(folds):
            val_idx = splits[held_out]
            train_idx = np.concatenate([splits[j] for j in range(folds) if j != held_out])
            model, history = train_model(hp, data[train_idx], labels[train_idx],
                                         config, family)
            pred = predict(model, data[val_idx], history["stats"])
            fold_acc.append(float(np.mean(pred == labels[val_idx])))
        rows.append({
            "hp": hp.to_dict(),
            "fold_accuracies": fold_acc,
            "mean_accuracy": float(np.mean(fold_acc)),
            "params": EEGClassifier(hp, family).parameter_total(),
            "chosen": False,
        })
    rows.sort(key=_sort_key)
    rows[0]["chosen"] = True
    best = HyperParams(**rows[0]["hp"])
    return best, rows
