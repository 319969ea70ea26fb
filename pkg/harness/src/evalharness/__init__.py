"""Reference classifier harness for clean-vs-adversarial CIFAR-10 scoring."""

from .cifar import BatchFormatError, load_batch, load_batches, save_batch
from .model import SmallConvNet, arch_fingerprint
from .predict import BatchMisaligned, predict_pairs
from .training import (
    AccuracyFloorUnmet,
    Hyperparameters,
    TrainingDiverged,
    evaluate,
    load_model,
    train_small_model,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyFloorUnmet",
    "BatchFormatError",
    "BatchMisaligned",
    "Hyperparameters",
    "SmallConvNet",
    "TrainingDiverged",
    "arch_fingerprint",
    "evaluate",
    "load_batch",
    "load_batches",
    "load_model",
    "predict_pairs",
    "save_batch",
    "train_small_model",
]
