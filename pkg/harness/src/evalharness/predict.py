"""Paired clean/adversarial inference and prediction-file export.

The harness sees only pixels: two CIFAR batches that must agree on record
count and labels. It never reads mask files or attack parameters. Output is
the `fakeweather-preds v1` text format (see the toolkit's FORMATS.md), one
`index,true_label,clean_pred,adv_pred` line per scored record, written
atomically (temp file, then rename).
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import torch

from .cifar import load_batch
from .model import normalize
from .training import load_model

PREDS_MAGIC = "fakeweather-preds v1"


class BatchMisaligned(ValueError):
    """Clean and adversarial batches disagree on count or labels."""


@torch.no_grad()
def _argmax_classes(model, images_np: np.ndarray, batch_size: int = 512) -> np.ndarray:
    images = torch.from_numpy(np.ascontiguousarray(images_np))
    out = []
    for start in range(0, images.shape[0], batch_size):
        logits = model(normalize(images[start : start + batch_size]))
        out.append(logits.argmax(dim=1).numpy())
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def predict_pairs(
    models_dir,
    model_id: str,
    clean_path,
    adv_path,
    out_path,
    limit: int | None = None,
    offset: int = 0,
) -> int:
    """Score a window of aligned records; returns the number of lines written.

    Indices in the output are absolute record positions within the batch, so
    a window's scores can be matched back to the original samples.
    """
    model, _manifest = load_model(models_dir, model_id)
    clean_images, clean_labels = load_batch(clean_path)
    adv_images, adv_labels = load_batch(adv_path)

    if clean_labels.shape[0] != adv_labels.shape[0]:
        raise BatchMisaligned(
            f"record counts differ: clean has {clean_labels.shape[0]}, "
            f"adversarial has {adv_labels.shape[0]}"
        )
    if not np.array_equal(clean_labels, adv_labels):
        first = int(np.nonzero(clean_labels != adv_labels)[0][0])
        raise BatchMisaligned(f"labels differ at record {first}")
    if offset < 0 or (limit is not None and limit < 0):
        raise ValueError("offset and limit must be >= 0")

    end = clean_labels.shape[0] if limit is None else min(clean_labels.shape[0], offset + limit)
    start = min(offset, clean_labels.shape[0])

    clean_pred = _argmax_classes(model, clean_images[start:end])
    adv_pred = _argmax_classes(model, adv_images[start:end])

    lines = [PREDS_MAGIC]
    for k in range(end - start):
        lines.append(
            f"{start + k},{int(clean_labels[start + k])},"
            f"{int(clean_pred[k])},{int(adv_pred[k])}"
        )

    out_path = Path(out_path)
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    tmp_path.write_text("\n".join(lines) + "\n", encoding="ascii")
    os.replace(tmp_path, out_path)
    return end - start
