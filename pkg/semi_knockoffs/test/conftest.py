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

from pathlib import Path

import numpy as np
import pytest

from semi_knockoffs.core.dataset import TabularDataset

RESOURCES = Path(__file__).parent / "resources"


@pytest.fixture
def resources_dir() -> Path:
    return RESOURCES


@pytest.fixture
def gaussian_data() -> TabularDataset:
    """n=200, p=4; y depends on x0 and x1 only."""
    rng = np.random.default_rng(11)
    inputs = rng.standard_normal((200, 4))
    response = 2.0 * inputs[:, 0] - inputs[:, 1] + 0.5 * rng.standard_normal(200)
    return TabularDataset(inputs, response)


@pytest.fixture
def toy_csv(tmp_path) -> Path:
    """Regression CSV with a header row: y = 3 a - 2 b + noise, c and d are noise."""
    rng = np.random.default_rng(5)
    n = 150
    a, b, c, d = rng.standard_normal((4, n))
    y = 3.0 * a - 2.0 * b + 0.3 * rng.standard_normal(n)
    path = tmp_path / "toy.csv"
    lines = ["a,b,c,d,y"] + [f"{a[i]:.6f},{b[i]:.6f},{c[i]:.6f},{d[i]:.6f},{y[i]:.6f}" for i in range(n)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def binary_csv(tmp_path) -> Path:
    rng = np.random.default_rng(9)
    n = 200
    inputs = rng.standard_normal((n, 3))
    labels = (inputs[:, 0] + 0.8 * rng.standard_normal(n) > 0).astype(int)
    path = tmp_path / "binary.csv"
    lines = ["u,v,w,label"] + [f"{x[0]:.6f},{x[1]:.6f},{x[2]:.6f},{lab}" for x, lab in zip(inputs, labels)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
