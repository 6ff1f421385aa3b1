"""Evaluation metrics and per-subject summary reporting.

Kappa uses the random classification rate 1/n_classes as the chance
term, which is how the published per-subject (accuracy, kappa) pairs
for this task are related.  The cross-subject spread is reported with
both the sample (n-1) and population conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def accuracy(pred, truth) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ValueError(f"prediction/truth shapes differ: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("empty prediction list")
    return float(np.mean(pred == truth))


def kappa(acc: float, n_classes: int) -> float:
    """Chance-corrected agreement (p_o - p_e)/(1 - p_e) with p_e = 1/n."""
    if n_classes < 2:
        raise ValueError(f"need at least 2 classes, got {n_classes}")
    if not 0.0 <= acc <= 1.0:
        raise ValueError(f"accuracy must lie in [0, 1], got {acc}")
    p_e = 1.0 / n_classes
    return (acc - p_e) / (1.0 - p_e)


def confusion_matrix(pred, truth, n_classes: int) -> np.ndarray:
    """Counts[true, predicted]; row sums are per-class trial counts."""
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise ValueError(f"prediction/truth shapes differ: {pred.shape} vs {truth.shape}")
    m = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(m, (truth, pred), 1)
    return m


def _spread(values: list[float]) -> tuple[float, float]:
    """(sample std, population std); zero spread for a single value."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        return 0.0, 0.0
    return float(arr.std(ddof=1)), float(arr.std(ddof=0))


@dataclass(frozen=True)
class EvalReport:
    accuracies: tuple[float, ...]
    kappas: tuple[float, ...]
    confusions: tuple[np.ndarray, ...]
    n_classes: int
    mean_accuracy: float
    std_accuracy: float
    std_accuracy_population: float
    mean_kappa: float
    std_kappa: float
    std_kappa_population: float

    def to_dict(self) -> dict:
        return {
            "subjects": [
                {
                    "accuracy": a,
                    "kappa": k,
                    "n_trials": int(c.sum()),
                    "confusion": c.tolist(),
                }
                for a, k, c in zip(self.accuracies, self.kappas, self.confusions)
            ],
            "n_classes": self.n_classes,
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "std_accuracy_population": self.std_accuracy_population,
            "mean_kappa": self.mean_kappa,
            "std_kappa": self.std_kappa,
            "std_kappa_population": self.std_kappa_population,
        }


def evaluate(predictions, truths, n_classes: int = 4) -> EvalReport:
    """Per-subject accuracy/kappa/confusion plus cross-subject stats.

    ``predictions`` and ``truths`` are parallel lists with one label
    sequence per subject.
    """
    if len(predictions) == 0 or len(predictions) != len(truths):
        raise ValueError(
            f"need matching non-empty per-subject lists, got {len(predictions)} vs {len(truths)}")
    accs, kaps, confs = [], [], []
    for pred, truth in zip(predictions, truths):
        a = accuracy(pred, truth)
        accs.append(a)
        kaps.append(kappa(a, n_classes))
        confs.append(confusion_matrix(pred, truth, n_classes))
    sa, pa = _spread(accs)
    sk, pk = _spread(kaps)
    return EvalReport(
        accuracies=tuple(accs),
        kappas=tuple(kaps),
        confusions=tuple(confs),
        n_classes=n_classes,
        mean_accuracy=float(np.mean(accs)),
        std_accuracy=sa,
        std_accuracy_population=pa,
        mean_kappa=float(np.mean(kaps)),
        std_kappa=sk,
        std_kappa_population=pk,
    )


def render_report(rep: EvalReport, show_confusions: bool = True) -> str:
    """Subject-per-row table with Mean / Std. Dev. footer, percent
    accuracies at two decimals."""
    lines = [f"{'Subject':<10}{'Accuracy':>9}{'kappa':>7}"]
    for i, (a, k) in enumerate(zip(rep.accuracies, rep.kappas), start=1):
        lines.append(f"{i:<10}{100 * a:>9.2f}{k:>7.2f}")
    lines.append(f"{'Mean':<10}{100 * rep.mean_accuracy:>9.2f}{rep.mean_kappa:>7.2f}")
    lines.append(f"{'Std. Dev.':<10}{100 * rep.std_accuracy:>9.2f}{rep.std_kappa:>7.2f}")
    if show_confusions:
        for i, c in enumerate(rep.confusions, start=1):
            lines.append(f"confusion (subject {i}, rows=truth):")
            for row in c:
                lines.append("  " + " ".join(f"{v:>5d}" for v in row))
    return "\n".join(lines)
