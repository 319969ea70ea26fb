"""The surrogate classifier: a three-block convolutional net.

Small enough to train on a desk CPU in minutes, strong enough to clear 60%
CIFAR-10 test accuracy within a handful of epochs.
"""

from __future__ import annotations

import hashlib

import torch
from torch import nn

ARCH_NAME = "smallcnn-16-32-64"


class SmallConvNet(nn.Module):
    def __init__(self, n_classes: int = 10):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 16, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),  # 16x16
            nn.Conv2d(16, 32, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),  # 8x8
            nn.Conv2d(32, 64, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),  # 4x4
        )
        self.classifier = nn.Linear(64 * 4 * 4, n_classes)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.features(x)
        return self.classifier(torch.flatten(x, 1))


_LAYOUT = (
    "conv3x3:3->16|pool2|conv3x3:16->32|pool2|conv3x3:32->64|pool2|fc:1024->10"
)


def arch_fingerprint() -> str:
    """Stable digest of the architecture's layer layout."""
    return hashlib.sha256((ARCH_NAME + "|" + _LAYOUT).encode()).hexdigest()


def normalize(images_u8: torch.Tensor) -> torch.Tensor:
    """uint8 (N, 3, 32, 32) -> float32 in [0, 1]."""
    return images_u8.float() / 255.0
