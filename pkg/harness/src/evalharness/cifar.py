"""Standalone CIFAR-10 binary batch reader.

Record layout (3073 bytes): label byte 0-9, then 1024 red + 1024 green +
1024 blue plane bytes, each plane row-major from the top-left. The harness
deliberately carries its own reader so it shares nothing with the attack
toolkit beyond the file format itself.
"""

from __future__ import annotations

import numpy as np

RECORD_BYTES = 3073


class BatchFormatError(ValueError):
    pass


def load_batch(path) -> tuple[np.ndarray, np.ndarray]:
    """Returns (images, labels): uint8 (N, 3, 32, 32) and uint8 (N,)."""
    data = np.fromfile(path, dtype=np.uint8)
    if data.size % RECORD_BYTES != 0:
        raise BatchFormatError(
            f"{path}: length {data.size} is not a multiple of {RECORD_BYTES}"
        )
    records = data.reshape(-1, RECORD_BYTES)
    labels = records[:, 0]
    if labels.size and labels.max() > 9:
        raise BatchFormatError(f"{path}: label byte {labels.max()} > 9")
    images = records[:, 1:].reshape(-1, 3, 32, 32)
    return images, labels


def load_batches(paths) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate several batch files in the given order."""
    loaded = [load_batch(p) for p in paths]
    images = np.concatenate([im for im, _ in loaded])
    labels = np.concatenate([lb for _, lb in loaded])
    return images, labels


def save_batch(path, images: np.ndarray, labels: np.ndarray) -> None:
    """Inverse of load_batch; mainly used to build synthetic fixtures."""
    n = labels.shape[0]
    records = np.empty((n, RECORD_BYTES), dtype=np.uint8)
    records[:, 0] = labels
    records[:, 1:] = images.reshape(n, 3072)
    records.tofile(path)
