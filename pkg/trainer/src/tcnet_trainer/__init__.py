"""Training side of the compact EEG-TCN classifier family: dataset
conversion, the training recipe, per-subject grid search, and weight
export in the engine's exchange format."""

from .convert import convert_session, window_session
from .hyperparams import HyperParams, hyperparams_from_dict, load_config
from .model import EEGClassifier, build_plan
from .search import SEARCH_SPACE, candidates, grid_search
from .train import (
    DivergenceError,
    TrainingConfig,
    export_weights,
    fit_standardization,
    predict,
    train_model,
)

__version__ = "1.0.0"

__all__ = [
    "DivergenceError", "EEGClassifier", "HyperParams", "SEARCH_SPACE",
    "TrainingConfig", "build_plan", "candidates", "convert_session",
    "export_weights", "fit_standardization", "grid_search",
    "hyperparams_from_dict", "load_config", "predict", "train_model",
    "window_session",
]
