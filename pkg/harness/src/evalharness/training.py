"""Seeded training with persistence, an accuracy floor, and divergence checks.

Artifacts land in <models_dir>/<model_id>/ as weights.pt plus manifest.json
recording the architecture fingerprint, seed, hyperparameters and measured
test accuracy, so every prediction file stays attributable to one training
run. Training is bit-reproducible on a single platform: fixed seeds,
deterministic kernels, and (by default) one CPU thread.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .cifar import load_batch, load_batches
from .model import SmallConvNet, arch_fingerprint, normalize

MANIFEST_NAME = "manifest.json"
WEIGHTS_NAME = "weights.pt"


class TrainingDiverged(RuntimeError):
    """Loss went non-finite; reports the curve collected so far."""

    def __init__(self, curve: list[float]):
        super().__init__(f"training diverged (loss went non-finite); curve so far: {curve}")
        self.curve = curve


class AccuracyFloorUnmet(RuntimeError):
    """The trained model missed the required clean test accuracy."""

    def __init__(self, accuracy: float, floor: float, curve: list[float]):
        super().__init__(
            f"clean test accuracy {accuracy:.4f} is below the required "
            f"{floor:.4f}; training curve: {curve}"
        )
        self.accuracy = accuracy
        self.curve = curve


@dataclass(frozen=True)
class Hyperparameters:
    epochs: int = 8
    batch_size: int = 128
    learning_rate: float = 1e-3
    weight_decay: float = 1e-4
    threads: int = 1


def _epoch_batches(n: int, batch_size: int, generator: torch.Generator):
    order = torch.randperm(n, generator=generator)
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


@torch.no_grad()
def evaluate(model: nn.Module, images: torch.Tensor, labels: torch.Tensor,
             batch_size: int = 512) -> float:
    model.eval()
    hits = 0
    for start in range(0, images.shape[0], batch_size):
        x = normalize(images[start : start + batch_size])
        pred = model(x).argmax(dim=1)
        hits += int((pred == labels[start : start + batch_size]).sum())
    return hits / images.shape[0]


def train_small_model(
    train_paths,
    test_path,
    models_dir,
    hp: Hyperparameters = Hyperparameters(),
    seed: int = 0,
    min_accuracy: float = 0.60,
) -> str:
    """Train the surrogate net and persist it; returns its model id.

    Raises TrainingDiverged on a non-finite loss and AccuracyFloorUnmet when
    the clean test accuracy lands under `min_accuracy` (the artifact is kept
    either way, flagged as failed in its manifest, so the curve can be
    inspected).
    """
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True)
    torch.set_num_threads(hp.threads)

    train_images_np, train_labels_np = load_batches(train_paths)
    test_images_np, test_labels_np = load_batch(test_path)
    train_images = torch.from_numpy(np.ascontiguousarray(train_images_np))
    train_labels = torch.from_numpy(train_labels_np.astype(np.int64))
    test_images = torch.from_numpy(np.ascontiguousarray(test_images_np))
    test_labels = torch.from_numpy(test_labels_np.astype(np.int64))

    model = SmallConvNet()
    optimizer = torch.optim.Adam(
        model.parameters(), lr=hp.learning_rate, weight_decay=hp.weight_decay
    )
    loss_fn = nn.CrossEntropyLoss()
    shuffler = torch.Generator().manual_seed(seed)

    curve: list[float] = []
    for _epoch in range(hp.epochs):
        model.train()
        total, seen = 0.0, 0
        for idx in _epoch_batches(train_images.shape[0], hp.batch_size, shuffler):
            x = normalize(train_images[idx])
            y = train_labels[idx]
            optimizer.zero_grad()
            loss = loss_fn(model(x), y)
            if not torch.isfinite(loss):
                raise TrainingDiverged(curve)
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * y.shape[0]
            seen += y.shape[0]
        epoch_loss = total / max(seen, 1)
        if not math.isfinite(epoch_loss):
            raise TrainingDiverged(curve)
        curve.append(epoch_loss)

    accuracy = evaluate(model, test_images, test_labels)

    model_id = f"smallcnn-seed{seed}-{arch_fingerprint()[:8]}"
    out_dir = Path(models_dir) / model_id
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "model_id": model_id,
        "arch_fingerprint": arch_fingerprint(),
        "seed": seed,
        "hyperparameters": asdict(hp),
        "train_files": [str(p) for p in train_paths],
        "test_file": str(test_path),
        "train_records": int(train_labels.shape[0]),
        "clean_test_accuracy": accuracy,
        "loss_curve": curve,
        "accuracy_floor": min_accuracy,
        "floor_met": accuracy >= min_accuracy,
    }
    torch.save(model.state_dict(), out_dir / WEIGHTS_NAME)
    (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")

    if accuracy < min_accuracy:
        raise AccuracyFloorUnmet(accuracy, min_accuracy, curve)
    return model_id


def load_model(models_dir, model_id: str) -> tuple[nn.Module, dict]:
    """Load a persisted model and its manifest by id."""
    out_dir = Path(models_dir) / model_id
    manifest_path = out_dir / MANIFEST_NAME
    weights_path = out_dir / WEIGHTS_NAME
    if not manifest_path.exists() or not weights_path.exists():
        raise FileNotFoundError(f"unknown model id {model_id!r} under {models_dir}")
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("arch_fingerprint") != arch_fingerprint():
        raise RuntimeError(
            f"model {model_id!r} was trained with a different architecture"
        )
    model = SmallConvNet()
    model.load_state_dict(torch.load(weights_path, weights_only=True))
    model.eval()
    return model, manifest
