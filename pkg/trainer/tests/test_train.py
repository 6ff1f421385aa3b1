import json

import numpy as np
import pytest

from tcnet_trainer import (
    DivergenceError,
    HyperParams,
    TrainingConfig,
    export_weights,
    predict,
    train_model,
)
from tcnet_trainer.formats import decode_weights


SMALL = HyperParams(F1=4, F2=8, K_E=8, K_T=3, L=2, F_T=6, C=4, T=128, standardize=True)


def test_defaults_follow_the_recipe():
    cfg = TrainingConfig()
    assert (cfg.epochs, cfg.learning_rate, cfg.batch_size) == (750, 0.001, 64)
    assert cfg.overrides() == {}
    assert TrainingConfig(epochs=50).overrides() == {"epochs": 50}


def test_toy_separable_converges_within_50_epochs(toy_small):
    data, labels = toy_small
    model, hist = train_model(SMALL, data, labels,
                              TrainingConfig(epochs=50, batch_size=8, seed=1))
    acc = float(np.mean(predict(model, data, hist["stats"]) == labels))
    assert acc >= 0.95


def test_divergence_reports_epoch(toy_small):
    data, labels = toy_small
    with pytest.raises(DivergenceError) as err:
        train_model(SMALL, data, labels,
                    TrainingConfig(epochs=10, batch_size=16, learning_rate=1e30, seed=0))
    assert err.value.epoch >= 0


def test_standardization_respected(toy_small):
    data, labels = toy_small
    cfg = TrainingConfig(epochs=1, batch_size=32, seed=0)
    _, hist = train_model(SMALL, data, labels, cfg)
    assert hist["stats"] is not None
    import dataclasses
    raw_hp = dataclasses.replace(SMALL, standardize=False)
    _, hist2 = train_model(raw_hp, data, labels, cfg)
    assert hist2["stats"] is None


def test_export_writes_canonical_container(tmp_path, toy_small):
    data, labels = toy_small
    cfg = TrainingConfig(epochs=2, batch_size=32, seed=3)
    model, hist = train_model(SMALL, data, labels, cfg)
    out = tmp_path / "w.etcw"
    export_weights(model, out, cfg)
    tensors, meta = decode_weights(out.read_bytes())
    assert meta["family"] == "eeg_tcnet"
    assert meta["hyperparams"]["F1"] == 4
    assert meta["training"]["recipe"]["epochs"] == 2
    names = [n for n, _ in tensors]
    assert names[0] == "L00.weight"
    total = sum(t.size for _, t in tensors)
    assert total == model.parameter_total()
    # exported values match the live model
    state = dict(model.named_canonical_tensors())
    for name, t in tensors:
        np.testing.assert_array_equal(t, state[name].detach().numpy())


def test_stats_file_schema(tmp_path, toy_small):
    data, labels = toy_small
    _, hist = train_model(SMALL, data, labels, TrainingConfig(epochs=1, batch_size=32))
    path = tmp_path / "stats.json"
    hist["stats"].save(path)
    doc = json.loads(path.read_text())
    assert set(doc) == {"mean", "std"}
    assert len(doc["mean"]) == 4 and len(doc["std"]) == 4
