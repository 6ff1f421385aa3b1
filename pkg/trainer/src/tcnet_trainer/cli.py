"""Command line: convert sessions, train models, search hyperparameters."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path


from .convert import convert_session
from .hyperparams import load_config
from .search import SEARCH_SPACE, candidates, grid_search
from .train import (
    TrainingConfig,
    export_weights,
    fit_standardization,
    load_trials_file,
    train_model,
)


def cmd_convert(args) -> int:
    kept, dropped = convert_session(args.session, args.out)
    print(f"wrote {args.out}: {kept} trials ({dropped} artifact trials dropped)")
    return 0


def _config_from_args(args) -> TrainingConfig:
    cfg = TrainingConfig()
    overrides = {}
    for name in ("epochs", "batch_size", "seed"):
        v = getattr(args, name)
        if v is not None:
            overrides[name] = v
    if args.learning_rate is not None:
        overrides["learning_rate"] = args.learning_rate
    return dataclasses.replace(cfg, **overrides)


def cmd_train(args) -> int:
    hp = load_config(args.config)
    data, labels, fs, n_classes = load_trials_file(args.train)
    config = _config_from_args(args)
    model, history = train_model(hp, data, labels, config, family=args.family)
    export_weights(model, args.out, config)
    print(f"wrote {args.out}: {model.parameter_total()} weight elements, "
          f"final training accuracy {history['accuracy'][-1]:.4f}")
    if args.stats_out:
        stats = history["stats"] or fit_standardization(data)
        stats.save(args.stats_out)
        print(f"wrote {args.stats_out}")
    return 0


def cmd_search(args) -> int:
    data, labels, fs, n_classes = load_trials_file(args.train)
    config = _config_from_args(args)
    space = dict(SEARCH_SPACE)
    if args.grid == "small":
        space = {"K_T": (3, 4), "L": (2,), "F_T": (12,), "F1": (8,),
                 "K_E": (32,), "p_e": (0.2,), "p_t": (0.3,), "standardize": (True,)}
    best, rows = grid_search(candidates(space), data, labels,
                             folds=args.folds, config=config, family=args.family)
    doc = {"folds": args.folds, "family": args.family, "results": rows}
    Path(args.out).write_text(json.dumps(doc, indent=2), encoding="utf-8")
    print(f"wrote {args.out}: best mean accuracy "
          f"{rows[0]['mean_accuracy']:.4f} with {json.dumps(best.to_dict())}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tcnet-train",
        description="Dataset conversion, training and grid search for the "
                    "compact EEG-TCN classifier family.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="NPZ session -> ETRL trials")
    c.add_argument("--session", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_convert)

    t = sub.add_parser("train", help="train one configuration and export ETCW")
    t.add_argument("--config", required=True, help="hyperparameter JSON document")
    t.add_argument("--train", required=True, help="training-session ETRL")
    t.add_argument("--out", required=True, help="output ETCW path")
    t.add_argument("--stats-out", default=None,
                   help="write the standardization statistics JSON here")
    t.add_argument("--family", choices=("eeg_tcnet", "eegnet"), default="eeg_tcnet")
    t.add_argument("--epochs", type=int, default=None)
    t.add_argument("--learning-rate", type=float, default=None)
    t.add_argument("--batch-size", type=int, default=None)
    t.add_argument("--seed", type=int, default=None)
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("search", help="cross-validated grid search on the training session")
    s.add_argument("--train", required=True)
    s.add_argument("--out", required=True, help="result table JSON path")
    s.add_argument("--folds", type=int, default=4)
    s.add_argument("--grid", choices=("full", "small"), default="full")
    s.add_argument("--family", choices=("eeg_tcnet", "eegnet"), default="eeg_tcnet")
    s.add_argument("--epochs", type=int, default=None)
    s.add_argument("--learning-rate", type=float, default=None)
    s.add_argument("--batch-size", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        missing = exc.filename if exc.filename is not None else exc.args[0]
        print(f"error: no such file: {missing}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
