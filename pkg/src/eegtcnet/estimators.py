"""Scikit-learn style wrappers around the engine.

These make the runtime compose with the wider ecosystem (pipelines,
clone, get_params/set_params).  Trials are 3D arrays (n, C, T), so only
estimator mechanics are sklearn-standard, not the 2D feature-matrix
assumption of its built-in checks.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .engine import predict_batch
from .quantize import forward_quantized, quantize_weights
from .standardize import fit_stats
from .store import QuantizedWeightStore, WeightStore, load_weights
from .trials import TrialSet
from .validation import check_trials_array


class ChannelStandardizer(TransformerMixin, BaseEstimator):
    """Remove per-channel mean and scale to unit variance, with the
    statistics taken from the data seen at fit time only."""

    def __init__(self, std_floor: float = 1e-8):
        self.std_floor = std_floor

    def fit(self, X, y=None):
        X = check_trials_array(X)
        stats = fit_stats(X)
        self.mean_ = stats.mean
        self.std_ = np.maximum(stats.std, self.std_floor)
        return self

    def transform(self, X):
        if not hasattr(self, "mean_"):
            raise NotFittedError("ChannelStandardizer is not fitted")
        X = check_trials_array(X, C=self.mean_.shape[0])
        out = (X.astype(np.float64) - self.mean_[None, :, None]) / self.std_[None, :, None]
        return out.astype(np.float32)


class TCNetClassifier(ClassifierMixin, BaseEstimator):
    """Frozen-weight classifier over (n, C, T) trials.

    ``weights`` is a WeightStore or a path to an ETCW container.  fit()
    does not train: it resolves the weights, optionally fits the
    per-channel standardization statistics on X, and optionally
    calibrates 8-bit quantization on X.

    Parameters
    ----------
    weights : WeightStore | str | Path
    standardize : "auto" uses the flag stored with the weights; a bool
        overrides it.
    quantize : run simulated int8 inference, calibrated on the fit data.
    workers : trials evaluated concurrently by predict_proba.
    """

    def __init__(self, weights=None, standardize="auto", quantize=False, workers=1):
        self.weights = weights
        self.standardize = standardize
        self.quantize = quantize
        self.workers = workers

    def _resolve_store(self) -> WeightStore:
        if self.weights is None:
            raise ValueError("weights must be a WeightStore or a path to an ETCW file")
        if isinstance(self.weights, (str, Path)):
            store = load_weights(Path(self.weights).read_bytes())
        else:
            store = self.weights
        if isinstance(store, QuantizedWeightStore):
            store = store.dequantized()
        return store

    def fit(self, X, y=None):
        store = self._resolve_store()
        self.store_ = store
        self.graph_ = store.graph()
        want_std = store.hp.standardize if self.standardize == "auto" else bool(self.standardize)
        self.stats_ = None
        if want_std:
            X = check_trials_array(X, C=store.hp.C, T=store.hp.T)
            self.stats_ = fit_stats(X)
        self.qstore_ = None
        if self.quantize:
            X = check_trials_array(X, C=store.hp.C, T=store.hp.T)
            calib = X if self.stats_ is None else self._apply_stats(X)
            self.qstore_, _ = quantize_weights(
                store, TrialSet(calib, np.zeros(len(calib), np.int64), 250.0, store.hp.n_classes))
        self.classes_ = np.arange(store.hp.n_classes)
        return self

    def _apply_stats(self, X):
        out = (X.astype(np.float64) - self.stats_.mean[None, :, None]) / self.stats_.std[None, :, None]
        return out.astype(np.float32)

    def predict_proba(self, X):
        if not hasattr(self, "store_"):
            raise NotFittedError("TCNetClassifier is not fitted")
        hp = self.store_.hp
        X = check_trials_array(X, C=hp.C, T=hp.T)
        if self.stats_ is not None:
            X = self._apply_stats(X)
        if self.qstore_ is not None:
            return np.stack([forward_quantized(self.graph_, self.qstore_, x) for x in X])
        trials = TrialSet(X, np.zeros(len(X), np.int64), 250.0, hp.n_classes)
        results = predict_batch(self.graph_, self.store_, trials, workers=self.workers)
        return np.stack([probs for _, probs in results])

    def predict(self, X):
        probs = self.predict_proba(X)
        return self.classes_[np.argmax(probs, axis=1)]
