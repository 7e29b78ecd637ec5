#!/usr/bin/env python3
# Copyright 2026 The semi_knockoffs Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Write a breast-cancer style binary-classification CSV for the null-injection protocol.

With --raw, a local copy of the UCI wdbc.data file (id, diagnosis, 30
measurements, no header) is converted to a CSV with a header row. Without
it, a synthetic stand-in of the same shape is drawn: 569 rows, 30 AR(1)
correlated features and a logistic response on the first five.
"""

import argparse
import sys
from pathlib import Path

import numpy as np
import pandas as pd

SCRIPT_DIR = Path(__file__).resolve().parent
PACKAGE_ROOT = SCRIPT_DIR.parent
if str(PACKAGE_ROOT) not in sys.path:
    sys.path.insert(0, str(PACKAGE_ROOT))

from semi_knockoffs.core.rng import RngStream  # noqa: E402
from semi_knockoffs.simbench.settings import ar1_covariance, symmetric_sqrt  # noqa: E402

N_ROWS = 569
N_FEATURES = 30
_STATISTICS = ("mean", "se", "worst")
_MEASUREMENTS = (
    "radius",
    "texture",
    "perimeter",
    "area",
    "smoothness",
    "compactness",
    "concavity",
    "concave_points",
    "symmetry",
    "fractal_dimension",
)
COLUMNS = [f"{m}_{s}" for s in _STATISTICS for m in _MEASUREMENTS]


def convert_raw(raw_path: Path) -> pd.DataFrame:
    frame = pd.read_csv(raw_path, header=None)
    if frame.shape[1] != N_FEATURES + 2:
        raise SystemExit(f"{raw_path}: expected {N_FEATURES + 2} columns, got {frame.shape[1]}")
    frame.columns = ["id", "diagnosis"] + COLUMNS
    frame["diagnosis"] = (frame["diagnosis"].str.strip() == "M").astype(int)
    return frame.drop(columns="id")


def synthetic_standin(seed: int, correlation: float = 0.7) -> pd.DataFrame:
    generator = RngStream(seed).generator()
    inputs = generator.standard_normal((N_ROWS, N_FEATURES)) @ symmetric_sqrt(ar1_covariance(N_FEATURES, correlation))
    coefficients = np.zeros(N_FEATURES)
    coefficients[:5] = (1.5, -1.0, 1.0, 0.8, -0.6)
    probability = 1.0 / (1.0 + np.exp(-(inputs @ coefficients)))
    frame = pd.DataFrame(inputs, columns=COLUMNS)
    frame.insert(0, "diagnosis", (generator.random(N_ROWS) < probability).astype(int))
    return frame


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("output", nargs="?", default="wdbc.csv", help="CSV to write (default: wdbc.csv)")
    parser.add_argument("--raw", type=Path, default=None, help="local wdbc.data file to convert")
    parser.add_argument("--seed", type=int, default=0, help="seed of the synthetic stand-in (default: 0)")
    args = parser.parse_args()

    frame = convert_raw(args.raw) if args.raw is not None else synthetic_standin(args.seed)
    frame.to_csv(args.output, index=False, lineterminator="\n")
    print(f"wrote {args.output}: {len(frame)} rows, target column 'diagnosis'")


if __name__ == "__main__":
    main()
