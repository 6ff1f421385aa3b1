import inspect

from tcnet_trainer import HyperParams, TrainingConfig, candidates, grid_search
from tcnet_trainer.search import SEARCH_SPACE, _sort_key



def test_candidates_cover_the_space():
    space = {"K_T": (3, 4), "L": (2, 3), "F_T": (12,), "F1": (8,),
             "K_E": (32,), "p_e": (0.2,), "p_t": (0.3,), "standardize": (True,)}
    hps = list(candidates(space))
    assert len(hps) == 4
    assert {(h.K_T, h.L) for h in hps} == {(3, 2), (3, 3), (4, 2), (4, 3)}
    assert all(h.F2 == 16 for h in hps)


def test_full_space_values_match_observed_settings():
    assert set(SEARCH_SPACE["K_T"]) == {3, 4}
    assert set(SEARCH_SPACE["L"]) == {2, 3, 4}
    assert set(SEARCH_SPACE["F_T"]) == {12, 15, 17, 20, 25}
    assert set(SEARCH_SPACE["F1"]) == {8, 16, 32}
    assert set(SEARCH_SPACE["K_E"]) == {32, 64, 128}


def test_grid_search_scores_and_chooses(toy_small):
    data, labels = toy_small
    space = {"K_T": (3,), "L": (2,), "F_T": (6, 8), "F1": (4,),
             "K_E": (8,), "p_e": (0.2,), "p_t": (0.3,), "standardize": (True,)}
    base = HyperParams(F1=4, F2=8, K_E=8, K_T=3, L=2, F_T=6, C=4, T=128)
    cfg = TrainingConfig(epochs=3, batch_size=16, seed=0)
    best, rows = grid_search(candidates(space, base), data, labels,
                             folds=2, config=cfg)
    assert len(rows) == 2
    assert sum(r["chosen"] for r in rows) == 1
    assert rows[0]["chosen"] and rows[0]["hp"] == best.to_dict()
    for r in rows:
        assert len(r["fold_accuracies"]) == 2
        assert 0.0 <= r["mean_accuracy"] <= 1.0
        assert r["params"] > 0
    assert best.F_T in (6, 8)


def test_tie_break_prefers_fewer_parameters():
    rows = [
        {"hp": {"F_T": 8}, "mean_accuracy": 0.8, "params": 900, "chosen": False},
        {"hp": {"F_T": 6}, "mean_accuracy": 0.8, "params": 700, "chosen": False},
        {"hp": {"F_T": 9}, "mean_accuracy": 0.9, "params": 999, "chosen": False},
    ]
    rows.sort(key=_sort_key)
    assert rows[0]["mean_accuracy"] == 0.9
    assert rows[1]["params"] == 700


def test_selection_cannot_see_a_test_session():
    # the interface has no test-data argument at all
    params = inspect.signature(grid_search).parameters
    assert not any("test" in name for name in params)
