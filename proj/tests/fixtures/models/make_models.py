#!/usr/bin/env python3
"""Regenerates the tiny ONNX networks used by the model-loading tests."""

import os
import sys

import torch
from torch import nn

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "..", "..", "tools"))

from onnx_compat import export  # noqa: E402


class Tiny(nn.Module):
    def __init__(self, outputs: int) -> None:
        super().__init__()
        self.conv = nn.Conv2d(3, 4, kernel_size=3, stride=4)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.fc = nn.Linear(4, outputs)

    def forward(self, x):
        return self.fc(torch.flatten(self.pool(torch.relu(self.conv(x))), 1))


def main() -> None:
    torch.manual_seed(7)
    export(Tiny(1000), os.path.join(HERE, "tiny_1000.onnx"))
    export(Tiny(10), os.path.join(HERE, "tiny_10.onnx"))


if __name__ == "__main__":
    main()
