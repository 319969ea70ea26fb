"""Harness CLI: train the surrogate model, then export prediction files.

Flag names mirror the attack toolkit's CLI (--cifar-*, --limit, --offset,
--seed, --out).
"""

from __future__ import annotations

import argparse
import sys

from .cifar import BatchFormatError
from .predict import BatchMisaligned, predict_pairs
from .training import (
    AccuracyFloorUnmet,
    Hyperparameters,
    TrainingDiverged,
    train_small_model,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evalharness",
        description="Train a small CIFAR-10 classifier and export prediction files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train and persist the surrogate model")
    t.add_argument("--cifar-train", required=True, nargs="+",
                   help="one or more training batch files")
    t.add_argument("--cifar-test", required=True, help="test batch file")
    t.add_argument("--models-dir", required=True, help="artifact directory")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--epochs", type=int, default=8)
    t.add_argument("--batch-size", type=int, default=128)
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--weight-decay", type=float, default=1e-4)
    t.add_argument("--threads", type=int, default=1,
                   help="torch CPU threads (1 keeps runs bit-reproducible)")
    t.add_argument("--min-accuracy", type=float, default=0.60,
                   help="required clean test accuracy")
    t.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="score a clean/adversarial batch pair")
    p.add_argument("--models-dir", required=True)
    p.add_argument("--model-id", required=True)
    p.add_argument("--cifar-clean", required=True, help="clean batch file")
    p.add_argument("--cifar-adv", required=True, help="adversarial batch file")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--out", required=True, help="prediction file to write")
    p.set_defaults(func=_cmd_predict)

    return parser


def _cmd_train(args) -> int:
    hp = Hyperparameters(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        weight_decay=args.weight_decay,
        threads=args.threads,
    )
    model_id = train_small_model(
        args.cifar_train,
        args.cifar_test,
        args.models_dir,
        hp=hp,
        seed=args.seed,
        min_accuracy=args.min_accuracy,
    )
    print(f"model_id={model_id}")
    return 0


def _cmd_predict(args) -> int:
    n = predict_pairs(
        args.models_dir,
        args.model_id,
        args.cifar_clean,
        args.cifar_adv,
        args.out,
        limit=args.limit,
        offset=args.offset,
    )
    print(f"records={n}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        return args.func(args)
    except (TrainingDiverged, AccuracyFloorUnmet) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except (BatchFormatError, BatchMisaligned, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
