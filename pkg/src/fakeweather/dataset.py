"""Bit-exact CIFAR-10 binary batch I/O and batch-wide mask application.

The binary format packs each record as 3073 bytes: one label byte (0-9)
followed by 3072 pixel bytes in channel-planar order (1024 red, 1024 green,
1024 blue), each plane row-major from the top-left.  Reading and writing are
exact inverses, so untouched records survive a round trip byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FormatError
from .image import ImageBuffer, apply_mask
from .maskgen import ImageDims, Mask

RECORD_BYTES = 3073

CIFAR_DIMS = ImageDims(32, 32)

#: Class index convention of the dataset.
CLASS_NAMES = (
    "airplane",
    "automobile",
    "bird",
    "cat",
    "deer",
    "dog",
    "frog",
    "horse",
    "ship",
    "truck",
)


@dataclass(frozen=True)
class LabeledImage:
    label: int
    image: ImageBuffer

    def __post_init__(self):
        if not 0 <= self.label <= 9:
            raise ValueError(f"label must be in 0..9, got {self.label!r}")

    @property
    def class_name(self) -> str:
        return CLASS_NAMES[self.label]


def read_cifar_batch(data: bytes) -> list[LabeledImage]:
    """Decode a binary batch, preserving record order."""
    if len(data) % RECORD_BYTES != 0:
        raise FormatError(
            f"batch length {len(data)} is not a multiple of {RECORD_BYTES}"
        )
    n = len(data) // RECORD_BYTES
    if n == 0:
        return []
    arr = np.frombuffer(data, dtype=np.uint8).reshape(n, RECORD_BYTES)
    labels = arr[:, 0]
    bad = np.nonzero(labels > 9)[0]
    if bad.size:
        raise FormatError(f"record {bad[0]} has label byte {labels[bad[0]]} > 9")
    # planar (3, 32, 32) -> interleaved rows of (r, g, b)
    planes = arr[:, 1:].reshape(n, 3, 32, 32).transpose(0, 2, 3, 1)
    return [
        LabeledImage(int(labels[k]), ImageBuffer(CIFAR_DIMS, planes[k].tobytes()))
        for k in range(n)
    ]


def write_cifar_batch(records: list[LabeledImage]) -> bytes:
    """Exact inverse of `read_cifar_batch`."""
    if not records:
        return b""
    out = np.empty((len(records), RECORD_BYTES), dtype=np.uint8)
    for k, rec in enumerate(records):
        if rec.image.dims != CIFAR_DIMS:
            raise DimensionMismatch(
                f"record {k} is {rec.image.dims.l}x{rec.image.dims.h}, "
                f"batches hold {CIFAR_DIMS.l}x{CIFAR_DIMS.h} images"
            )
        out[k, 0] = rec.label
        interleaved = np.frombuffer(rec.image.data, dtype=np.uint8).reshape(32, 32, 3)
        out[k, 1:] = interleaved.transpose(2, 0, 1).reshape(3072)
    return out.tobytes()


def perturb_batch(
    records: list[LabeledImage],
    mask: Mask,
    limit: int | None = None,
    offset: int = 0,
) -> list[LabeledImage]:
    """Apply the mask to a window of records, leaving the rest untouched.

    The window is records[offset : offset + limit] (to the end when limit is
    absent).  Labels, record count and order never change.
    """
    if mask.dims != CIFAR_DIMS:
        raise DimensionMismatch(
            f"mask is {mask.dims.l}x{mask.dims.h}, "
            f"batches hold {CIFAR_DIMS.l}x{CIFAR_DIMS.h} images"
        )
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset!r}")
    if limit is not None and limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit!r}")
    end = len(records) if limit is None else min(len(records), offset + limit)
    out = list(records)
    for k in range(min(offset, len(records)), end):
        out[k] = LabeledImage(out[k].label, apply_mask(out[k].image, mask))
    return out
