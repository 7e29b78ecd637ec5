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

"""Data-dependent knockoff threshold and Benjamini-Hochberg step-up."""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from ..exceptions import ConfigurationError, DimensionMismatchError


def _check_level(q: float) -> float:
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise ConfigurationError(f"target level must lie in (0, 1], got {q}")
    return q


def knockoff_threshold(statistics, q: float) -> Tuple[float, np.ndarray]:
    """Smallest t among the non-zero |W| with (1 + #{W <= -t}) / max(1, #{W >= t}) <= q.

    Returns (threshold, selected) where selected[j] = W[j] >= threshold;
    the threshold is +inf and nothing is selected when no candidate qualifies.
    """
    q = _check_level(q)
    w = np.asarray(statistics, dtype=float).reshape(-1)
    if w.size == 0:
        raise DimensionMismatchError("knockoff threshold needs at least one statistic")
    if not np.all(np.isfinite(w)):
        raise DimensionMismatchError("knockoff statistics must be finite")

    for t in np.unique(np.abs(w[w != 0])):
        false_estimate = 1 + np.count_nonzero(w <= -t)
        discoveries = max(1, int(np.count_nonzero(w >= t)))
        if false_estimate / discoveries <= q:
            return float(t), w >= t
    return math.inf, np.zeros(w.size, dtype=bool)


def benjamini_hochberg(p_values, q: float) -> np.ndarray:
    """Reject every p-value <= p_(k), k = max{i : p_(i) <= i q / m}."""
    q = _check_level(q)
    p = np.asarray(p_values, dtype=float).reshape(-1)
    if np.any((p < 0) | (p > 1)) or not np.all(np.isfinite(p)):
        raise ConfigurationError("p-values must lie in [0, 1]")
    m = p.size
    if m == 0:
        return np.zeros(0, dtype=bool)
    ordered = np.sort(p)
    passing = np.flatnonzero(ordered <= q * np.arange(1, m + 1) / m)
    if passing.size == 0:
        return np.zeros(m, dtype=bool)
    return p <= ordered[passing[-1]]
