#!/usr/bin/env python3
"""Exports torchvision's ResNet-50 to an ONNX file the C++ runtime can load.

    python3 tools/export_resnet50.py --out models/resnet50.onnx

Downloads the IMAGENET1K_V1 weights through torchvision (or uses its local
cache). --random-weights exports the untrained architecture instead, which
is only useful for timing runs.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import torchvision  # noqa: E402

from onnx_compat import export  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", required=True)
    parser.add_argument("--random-weights", action="store_true")
    args = parser.parse_args()

    weights = None if args.random_weights else torchvision.models.ResNet50_Weights.IMAGENET1K_V1
    model = torchvision.models.resnet50(weights=weights)
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    export(model, args.out)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
