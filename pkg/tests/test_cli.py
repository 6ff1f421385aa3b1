import json

import numpy as np
import pytest

from eegtcnet import HyperParams, TrialSet, build_eeg_tcnet, random_weights, save_trials, save_weights
from eegtcnet.cli import main

HP = HyperParams(F1=4, F2=8, K_E=8, K_T=3, L=2, F_T=6, C=5, T=128, standardize=False)


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    """Small on-disk fixtures: weights, trials, config."""
    root = tmp_path_factory.mktemp("cli")
    rng = np.random.default_rng(17)
    store = random_weights(build_eeg_tcnet(HP), rng)
    trials = TrialSet(rng.standard_normal((6, 5, 128)).astype(np.float32),
                      rng.integers(0, 4, 6), 250.0, 4)
    paths = {
        "weights": root / "w.etcw",
        "trials": root / "t.etrl",
        "calib": root / "c.etrl",
        "fixed_cfg": root / "fixed.json",
        "bad_cfg": root / "bad.json",
        "root": root,
    }
    paths["weights"].write_bytes(save_weights(store))
    paths["trials"].write_bytes(save_trials(trials))
    calib = TrialSet(rng.standard_normal((4, 5, 128)).astype(np.float32),
                     np.zeros(4, np.int64), 250.0, 4)
    paths["calib"].write_bytes(save_trials(calib))
    paths["fixed_cfg"].write_text("{}")
    paths["bad_cfg"].write_text('{"F1": 8, "bogus": 1}')
    return paths


class TestAnalyze:
    def test_fixed_headline_lines(self, files, capsys):
        assert main(["analyze", "--config", str(files["fixed_cfg"])]) == 0
        out = capsys.readouterr().out
        assert "params=4272" in out
        assert "peak_memory_bytes=396000" in out
        assert "rfs=19" in out

    def test_machine_format_keys_are_stable(self, files, capsys):
        assert main(["analyze", "--config", str(files["fixed_cfg"]), "--format", "machine"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"family", "params", "macs", "peak_memory_bytes",
                            "rfs", "input_bytes", "per_layer"}
        assert set(doc["per_layer"][0]) == {"name", "kind", "params", "macs",
                                            "out_bytes", "out_shape"}
        assert doc["params"] == 4272

    def test_missing_file_exit_2_names_path(self, files, capsys):
        assert main(["analyze", "--config", str(files["root"] / "absent.json")]) == 2
        assert "absent.json" in capsys.readouterr().err

    def test_unknown_config_key_exit_2(self, files, capsys):
        assert main(["analyze", "--config", str(files["bad_cfg"])]) == 2
        assert "bogus" in capsys.readouterr().err


class TestRfs:
    def test_with_bound(self, capsys):
        assert main(["rfs", "--kt", "4", "--layers", "2", "--min", "17"]) == 0
        assert capsys.readouterr().out.strip() == "19 (ok)"

    def test_without_bound(self, capsys):
        assert main(["rfs", "--kt", "3", "--layers", "3"]) == 0
        assert capsys.readouterr().out.strip() == "29"

    def test_unmet_bound_still_succeeds(self, capsys):
        assert main(["rfs", "--kt", "2", "--layers", "2", "--min", "17"]) == 0
        assert "too small" in capsys.readouterr().out


class TestInfer:
    def test_one_line_per_trial(self, files, capsys):
        assert main(["infer", "--weights", str(files["weights"]),
                     "--trials", str(files["trials"])]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 6
        first = lines[0].split()
        assert first[0] == "0"
        assert len(first) == 2 + 4      # index, class, four probabilities

    def test_geometry_mismatch_exit_3(self, files, capsys, tmp_path):
        wrong = TrialSet(np.zeros((2, 3, 100), np.float32), np.zeros(2, np.int64), 250.0, 4)
        p = tmp_path / "wrong.etrl"
        p.write_bytes(save_trials(wrong))
        assert main(["infer", "--weights", str(files["weights"]), "--trials", str(p)]) == 3
        err = capsys.readouterr().err
        assert "expected C=5, T=128" in err and "found C=3, T=100" in err

    def test_quantized_without_calibration_exit_4(self, files, capsys):
        assert main(["infer", "--weights", str(files["weights"]),
                     "--trials", str(files["trials"]), "--quantized"]) == 4

    def test_quantized_with_calibration(self, files, capsys):
        assert main(["infer", "--weights", str(files["weights"]),
                     "--trials", str(files["trials"]), "--quantized",
                     "--calibration", str(files["calib"])]) == 0
        assert len(capsys.readouterr().out.strip().splitlines()) == 6


class TestEval:
    def test_perfect_predictions(self, files, capsys, tmp_path):
        from eegtcnet import load_trials
        labels = load_trials(files["trials"].read_bytes()).labels
        pred = tmp_path / "pred.txt"
        pred.write_text("\n".join(str(int(v)) for v in labels))
        assert main(["eval", "--pred", str(pred), "--truth", str(files["trials"])]) == 0
        out = capsys.readouterr().out
        assert "100.00" in out and "1.00" in out

    def test_accepts_infer_formatted_lines(self, files, capsys, tmp_path):
        from eegtcnet import load_trials
        labels = load_trials(files["trials"].read_bytes()).labels
        pred = tmp_path / "pred.txt"
        pred.write_text("\n".join(f"{i} {int(v)} 0.9 0.1 0.0 0.0"
                                  for i, v in enumerate(labels)))
        assert main(["eval", "--pred", str(pred), "--truth", str(files["trials"]),
                     "--format", "machine"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["subjects"][0]["accuracy"] == 1.0

    def test_null_predictions_have_small_kappa(self, capsys, tmp_path):
        # uniform-random predictions against balanced labels: at n=288,
        # |kappa| < 0.1 i.e. |hits - 72| < 21.6 (about a 3-sigma event)
        rng = np.random.default_rng(2024)
        labels = np.repeat(np.arange(4), 72)
        truth = TrialSet(np.zeros((288, 2, 8), np.float32), labels, 250.0, 4)
        tpath = tmp_path / "truth.etrl"
        tpath.write_bytes(save_trials(truth))
        ppath = tmp_path / "pred.txt"
        ppath.write_text("\n".join(str(v) for v in rng.integers(0, 4, 288)))
        assert main(["eval", "--pred", str(ppath), "--truth", str(tpath),
                     "--format", "machine"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert abs(doc["subjects"][0]["kappa"]) < 0.1

    def test_multi_subject_rows(self, files, capsys, tmp_path):
        from eegtcnet import load_trials
        labels = load_trials(files["trials"].read_bytes()).labels
        preds = []
        for k in range(3):
            p = tmp_path / f"pred{k}.txt"
            p.write_text("\n".join(str(int(v)) for v in labels))
            preds.append(p)
        argv = ["eval"]
        for p in preds:
            argv += ["--pred", str(p), "--truth", str(files["trials"])]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "Mean" in out and "Std. Dev." in out

    def test_weights_mode(self, files, capsys):
        assert main(["eval", "--weights", str(files["weights"]),
                     "--trials", str(files["trials"])]) == 0
        assert "Mean" in capsys.readouterr().out

    def test_machine_format_keys_are_stable(self, files, capsys):
        assert main(["eval", "--weights", str(files["weights"]),
                     "--trials", str(files["trials"]), "--format", "machine"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"subjects", "n_classes", "mean_accuracy", "std_accuracy",
                            "std_accuracy_population", "mean_kappa", "std_kappa",
                            "std_kappa_population"}
        assert set(doc["subjects"][0]) == {"accuracy", "kappa", "n_trials", "confusion"}

    def test_count_mismatch_exit_3(self, files, capsys, tmp_path):
        pred = tmp_path / "short.txt"
        pred.write_text("0\n1\n")
        assert main(["eval", "--pred", str(pred), "--truth", str(files["trials"])]) == 3

    def test_missing_companion_exit_4(self, files):
        assert main(["eval", "--pred", "whatever.txt"]) == 4


class TestQuantizeInspect:
    def test_quantize_then_inspect_shows_int8(self, files, capsys, tmp_path):
        out = tmp_path / "q.etcw"
        assert main(["quantize", "--weights", str(files["weights"]),
                     "--calibration", str(files["calib"]), "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["inspect", "--file", str(out)]) == 0
        text = capsys.readouterr().out
        weight_lines = [l for l in text.splitlines() if l.startswith("  L")]
        assert weight_lines and all("dtype=1" in l for l in weight_lines)
        assert "activation_buffers=" in text

    def test_inspect_trials(self, files, capsys):
        assert main(["inspect", "--file", str(files["trials"])]) == 0
        out = capsys.readouterr().out
        assert "n_trials=6" in out and "C=5" in out and "T=128" in out and "fs=250" in out

    def test_inspect_unknown_format_exit_2(self, tmp_path, capsys):
        p = tmp_path / "junk.bin"
        p.write_bytes(b"JUNKJUNKJUNK")
        assert main(["inspect", "--file", str(p)]) == 2
