"""Compact temporal-convolutional EEG motor-imagery classifiers:
inference engine, static cost analyzer, exchange formats, metrics."""

from . import presets
from .analysis import CostReport, count_macs, count_params, peak_memory_bytes, report
from .engine import forward, predict_batch, run_layers
from .estimators import ChannelStandardizer, TCNetClassifier
from .graphs import (
    LayerGraph,
    LayerSpec,
    build_eeg_tcnet,
    build_eegnet,
    receptive_field_size,
    validate,
)
from .hyperparams import HyperParams, hyperparams_from_dict, load_config
from .metrics import EvalReport, accuracy, confusion_matrix, evaluate, kappa
from .quantize import QuantParams, forward_quantized, quantize_weights
from .standardize import (
    StandardizationStats,
    apply_standardization,
    fit_standardization,
)
from .store import (
    QuantizedWeightStore,
    WeightStore,
    load_weights,
    parameter_spec,
    random_weights,
    save_weights,
)
from .trials import TrialSet, extract_window, load_trials, save_trials

__version__ = "1.0.0"

__all__ = [
    "ChannelStandardizer", "CostReport", "EvalReport", "HyperParams",
    "LayerGraph", "LayerSpec", "QuantParams", "QuantizedWeightStore",
    "StandardizationStats", "TCNetClassifier", "TrialSet", "WeightStore",
    "accuracy", "apply_standardization", "build_eeg_tcnet", "build_eegnet",
    "confusion_matrix", "count_macs", "count_params", "evaluate",
    "extract_window", "fit_standardization", "forward", "forward_quantized",
    "hyperparams_from_dict", "kappa", "load_config", "load_trials",
    "load_weights", "parameter_spec", "peak_memory_bytes", "predict_batch",
    "presets", "quantize_weights", "random_weights", "receptive_field_size",
    "report", "run_layers", "save_trials", "save_weights", "validate",
]
