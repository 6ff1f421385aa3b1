"""Command-line entry point.

Exit codes: 0 ok, 2 missing/invalid input file, 3 geometry mismatch,
4 missing required companion input, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

import numpy as np

from .analysis import render_report, report
from .engine import predict_batch
from .errors import (
    CalibrationError,
    ConfigError,
    FormatError,
    GeometryError,
    GraphError,
)
from .graphs import receptive_field_size
from .hyperparams import load_config
from .metrics import evaluate
from .metrics import render_report as render_eval
from .quantize import forward_quantized, quantize_weights
from .standardize import StandardizationStats, apply_standardization, fit_standardization
from .store import QuantizedWeightStore, WeightStore, load_weights, save_weights
from .trials import TrialSet, load_trials

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_BAD_INPUT = 2
EXIT_GEOMETRY = 3
EXIT_MISSING_COMPANION = 4


class MissingCompanionError(ValueError):
    pass


def _read_bytes(path: str) -> bytes:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(path)
    return p.read_bytes()


def _load_store(path: str):
    return load_weights(_read_bytes(path))


def _load_trials(path: str) -> TrialSet:
    return load_trials(_read_bytes(path))


def _check_geometry(hp, trials: TrialSet) -> None:
    if (trials.C, trials.T) != (hp.C, hp.T):
        raise GeometryError(
            f"trial geometry mismatch: expected C={hp.C}, T={hp.T}, "
            f"found C={trials.C}, T={trials.T}")


def _resolve_stats(store, trials, stats_path):
    """Training-set statistics if given; otherwise fitted on the input
    when the weights ask for standardization."""
    if stats_path:
        return StandardizationStats.load(stats_path)
    if store.hp.standardize:
        print("note: standardization stats fitted on the input trials; "
              "pass --standardize-stats for training-set statistics", file=sys.stderr)
        return fit_standardization(trials)
    return None


def cmd_analyze(args) -> int:
    hp = load_config(args.config)
    rep = report(hp, args.family)
    if args.format == "machine":
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(render_report(rep))
    return EXIT_OK


def cmd_rfs(args) -> int:
    value = receptive_field_size(args.kt, args.layers)
    if args.min is None:
        print(value)
    elif value >= args.min:
        print(f"{value} (ok)")
    else:
        print(f"{value} (too small, minimum {args.min})")
    return EXIT_OK


def _predictions(store, trials, stats, quantized, calibration_path):
    graph = store.graph()
    data = trials.data
    if stats is not None:
        data = apply_standardization(data, stats)
    base = store.dequantized() if isinstance(store, QuantizedWeightStore) else store
    if quantized:
        if isinstance(store, QuantizedWeightStore) and store.activation_quant is not None:
            qstore = store
        else:
            if not calibration_path:
                raise MissingCompanionError(
                    "--quantized on a float container requires --calibration")
            calib = _load_trials(calibration_path)
            _check_geometry(store.hp, calib)
            if stats is not None:
                calib = TrialSet(apply_standardization(calib.data, stats),
                                 calib.labels, calib.fs, calib.n_classes)
            qstore, _ = quantize_weights(base, calib)
        results = []
        for i in range(len(data)):
            probs = forward_quantized(graph, qstore, data[i])
            results.append((int(np.argmax(probs)), probs))
        return results
    plain = TrialSet(data, trials.labels, trials.fs, trials.n_classes)
    return predict_batch(graph, base, plain)


def cmd_infer(args) -> int:
    store = _load_store(args.weights)
    trials = _load_trials(args.trials)
    _check_geometry(store.hp, trials)
    stats = _resolve_stats(store, trials, args.standardize_stats)
    results = _predictions(store, trials, stats, args.quantized, args.calibration)
    for i, (pred, probs) in enumerate(results):
        print(f"{i} {pred} " + " ".join(f"{p:.6f}" for p in probs))
    return EXIT_OK


def _read_predictions(path: str) -> list[int]:
    """One class per line; infer-formatted lines (index class probs...)
    are accepted too, taking the second field."""
    out = []
    for line in _read_bytes(path).decode("utf-8").splitlines():
        tokens = line.split()
        if not tokens:
            continue
        out.append(int(tokens[0] if len(tokens) == 1 else tokens[1]))
    return out


def cmd_eval(args) -> int:
    preds, truths = [], []
    n_classes = None
    if args.pred:
        if not args.truth or len(args.truth) != len(args.pred):
            raise MissingCompanionError(
                f"each --pred needs a matching --truth "
                f"({len(args.pred)} vs {len(args.truth or [])})")
        for pred_path, truth_path in zip(args.pred, args.truth):
            p = _read_predictions(pred_path)
            t = _load_trials(truth_path)
            if len(p) != t.n_trials:
                raise GeometryError(
                    f"{pred_path}: {len(p)} predictions vs {t.n_trials} trials")
            preds.append(p)
            truths.append(t.labels)
            n_classes = t.n_classes
    elif args.weights:
        if not args.trials or len(args.trials) not in (len(args.weights),):
            if not args.trials:
                raise MissingCompanionError("--weights needs at least one --trials")
        weight_paths = args.weights
        if len(weight_paths) == 1 and args.trials and len(args.trials) > 1:
            weight_paths = weight_paths * len(args.trials)
        if len(weight_paths) != len(args.trials):
            raise MissingCompanionError(
                f"{len(args.weights)} --weights vs {len(args.trials)} --trials")
        stats_paths = args.standardize_stats or []
        if stats_paths and len(stats_paths) != len(args.trials):
            raise MissingCompanionError(
                f"{len(stats_paths)} --standardize-stats vs {len(args.trials)} --trials")
        for k, (wp, tp) in enumerate(zip(weight_paths, args.trials)):
            store = _load_store(wp)
            trials = _load_trials(tp)
            _check_geometry(store.hp, trials)
            stats = _resolve_stats(store, trials, stats_paths[k] if stats_paths else None)
            results = _predictions(store, trials, stats, False, None)
            preds.append([pred for pred, _ in results])
            truths.append(trials.labels)
            n_classes = trials.n_classes
    else:
        raise MissingCompanionError("eval needs --pred/--truth pairs or --weights/--trials")
    rep = evaluate(preds, truths, n_classes or 4)
    if args.format == "machine":
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(render_eval(rep))
    return EXIT_OK


def cmd_quantize(args) -> int:
    store = _load_store(args.weights)
    if isinstance(store, QuantizedWeightStore):
        raise FormatError(f"{args.weights} is already quantized")
    if not args.calibration:
        raise MissingCompanionError("quantize requires --calibration")
    calib = _load_trials(args.calibration)
    _check_geometry(store.hp, calib)
    qstore, _ = quantize_weights(store, calib)
    Path(args.out).write_bytes(save_weights(qstore))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    data = _read_bytes(args.file)
    magic = data[:4]
    if magic == b"ETCW":
        store = load_weights(data)
        quant = isinstance(store, QuantizedWeightStore)
        print("format=ETCW version=1")
        print(f"family={store.family}")
        print(f"hyperparams={json.dumps(store.hp.to_dict(), sort_keys=True)}")
        tensors = store.codes if quant else store.entries
        print(f"tensors={len(tensors)}")
        for name, t in tensors.items():
            dims = "x".join(str(d) for d in t.shape)
            dtype = 1 if quant else 0
            line = f"  {name} dtype={dtype} dims={dims}"
            if quant:
                line += f" scale={store.scales[name]:.8g} zero_point={store.zero_points[name]}"
            print(line)
        if quant and store.activation_quant is not None:
            print(f"activation_buffers={len(store.activation_quant)}")
    elif magic == b"ETRL":
        trials = load_trials(data)
        print("format=ETRL version=1")
        print(f"n_trials={trials.n_trials} C={trials.C} T={trials.T} "
              f"fs={trials.fs:g} n_classes={trials.n_classes}")
        hist = np.bincount(trials.labels, minlength=trials.n_classes)
        print("labels=" + " ".join(f"{c}:{n}" for c, n in enumerate(hist)))
    else:
        raise FormatError(f"{args.file}: unrecognized magic {magic!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eegtcnet",
        description="Inference engine and static cost analyzer for compact "
                    "temporal-convolutional EEG motor-imagery classifiers.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="static cost report for a configuration")
    a.add_argument("--config", required=True, help="hyperparameter JSON document")
    a.add_argument("--family", choices=("eeg_tcnet", "eegnet"), default="eeg_tcnet")
    a.add_argument("--format", choices=("text", "machine"), default="text")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("rfs", help="receptive field of a dilated stack")
    r.add_argument("--kt", type=int, required=True, help="kernel length")
    r.add_argument("--layers", type=int, required=True, help="residual block count")
    r.add_argument("--min", type=int, default=None, help="required lower bound")
    r.set_defaults(func=cmd_rfs)

    i = sub.add_parser("infer", help="classify every trial in an ETRL file")
    i.add_argument("--weights", required=True)
    i.add_argument("--trials", required=True)
    i.add_argument("--standardize-stats", default=None)
    i.add_argument("--quantized", action="store_true")
    i.add_argument("--calibration", default=None,
                   help="ETRL for activation calibration (with --quantized on float weights)")
    i.set_defaults(func=cmd_infer)

    e = sub.add_parser("eval", help="accuracy/kappa report, one subject per input pair")
    e.add_argument("--pred", action="append", help="prediction file (repeatable)")
    e.add_argument("--truth", action="append", help="ETRL with true labels (repeatable)")
    e.add_argument("--weights", action="append", help="ETCW container (repeatable)")
    e.add_argument("--trials", action="append", help="ETRL to classify (repeatable)")
    e.add_argument("--standardize-stats", action="append")
    e.add_argument("--format", choices=("text", "machine"), default="text")
    e.set_defaults(func=cmd_eval)

    q = sub.add_parser("quantize", help="write an int8 copy of a weight container")
    q.add_argument("--weights", required=True)
    q.add_argument("--calibration", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_quantize)

    n = sub.add_parser("inspect", help="dump an ETCW/ETRL header and manifest")
    n.add_argument("--file", required=True)
    n.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        missing = exc.filename if exc.filename is not None else exc.args[0]
        print(f"error: no such file: {missing}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (FormatError, ConfigError, GraphError, CalibrationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except MissingCompanionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_COMPANION
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
