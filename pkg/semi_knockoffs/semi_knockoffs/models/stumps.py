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

"""Squared-error gradient boosting with depth-1 trees."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from ..core.dataset import TabularDataset, TaskKind
from ..core.losses import DEFAULT_CLAMP_EPS
from ..core.model import PredictiveModel
from ..core.rng import RngStream, derive_stream
from ..exceptions import ConfigurationError, DimensionMismatchError

logger = logging.getLogger(__name__)

DEFAULT_ROUNDS = 200
DEFAULT_LEARNING_RATE = 0.1
_RELATIVE_MIN_GAIN = 1e-12


class Stump(NamedTuple):
    feature_index: int
    split_value: float
    left_value: float
    right_value: float

    def __call__(self, inputs: np.ndarray) -> np.ndarray:
        return np.where(inputs[:, self.feature_index] <= self.split_value, self.left_value, self.right_value)


@dataclass(frozen=True, eq=False)
class BoostedStumpsModel(PredictiveModel):
    """base_value + learning_rate * sum of stump outputs.

    For a binary response the sum is read as a probability and clipped to
    [clamp_eps, 1 - clamp_eps].

    Stumps on the same feature are folded into one step function, so
    prediction costs one searchsorted per used feature.
    """

    stumps: Tuple[Stump, ...]
    learning_rate: float
    base_value: float
    rounds: int
    n_features: int
    task_kind: TaskKind = TaskKind.REGRESSION
    clamp_eps: float = DEFAULT_CLAMP_EPS
    _steps: Dict[int, Tuple[np.ndarray, np.ndarray]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.learning_rate <= 1.0:
            raise ConfigurationError(f"learning rate must lie in (0, 1], got {self.learning_rate}")
        object.__setattr__(self, "stumps", tuple(Stump(*s) for s in self.stumps))
        steps = {}
        for feature in sorted({s.feature_index for s in self.stumps}):
            own = sorted((s for s in self.stumps if s.feature_index == feature), key=lambda s: s.split_value)
            splits = np.array([s.split_value for s in own])
            lefts = np.array([s.left_value for s in own])
            rights = np.array([s.right_value for s in own])
            # level[k]: value when exactly k splits lie strictly below x
            level = np.concatenate([[0.0], np.cumsum(rights)]) + np.concatenate([np.cumsum(lefts[::-1])[::-1], [0.0]])
            steps[feature] = (splits, level)
        object.__setattr__(self, "_steps", steps)

    @property
    def identifier(self) -> str:
        return f"boosted_stumps[rounds={self.rounds}, lr={self.learning_rate:g}]"

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=float)
        if inputs.ndim != 2 or inputs.shape[1] != self.n_features:
            raise DimensionMismatchError(f"boosted stumps expect {self.n_features} columns, got shape {inputs.shape}")
        total = np.zeros(inputs.shape[0])
        for feature, (splits, level) in self._steps.items():
            total += level[np.searchsorted(splits, inputs[:, feature], side="left")]
        scores = self.base_value + self.learning_rate * total
        if self.task_kind is TaskKind.BINARY_CLASSIFICATION:
            return np.clip(scores, self.clamp_eps, 1.0 - self.clamp_eps)
        return scores


class _SortedColumns:
    """Per-feature sort orders and split candidates, computed once per fit."""

    def __init__(self, inputs: np.ndarray):
        self.order = np.argsort(inputs, axis=0, kind="stable")
        self.sorted_values = np.take_along_axis(inputs, self.order, axis=0)
        # a split between positions i and i+1 exists only when the values differ
        self.valid = self.sorted_values[:-1] < self.sorted_values[1:]
        self.midpoints = (self.sorted_values[:-1] + self.sorted_values[1:]) / 2.0
        n = inputs.shape[0]
        self.left_counts = np.arange(1, n)[:, None].astype(float)
        self.right_counts = n - self.left_counts


def _best_stump(columns: _SortedColumns, residuals: np.ndarray, allowed: np.ndarray) -> Optional[Stump]:
    n = residuals.shape[0]
    if n < 2:
        return None
    ordered = residuals[columns.order]
    left_sums = np.cumsum(ordered, axis=0)[:-1]
    total = float(residuals.sum())
    right_sums = total - left_sums
    gains = left_sums**2 / columns.left_counts + right_sums**2 / columns.right_counts - total**2 / n
    gains = np.where(columns.valid & allowed[None, :], gains, -np.inf)

    # feature-major flattening: first maximum = lowest feature, then lowest split
    flat = gains.T.ravel()
    best = int(np.argmax(flat))
    best_gain = flat[best]
    if not np.isfinite(best_gain) or best_gain <= _RELATIVE_MIN_GAIN * max(1.0, float(residuals @ residuals)):
        return None
    feature, position = divmod(best, n - 1)
    left_count = position + 1
    left_value = left_sums[position, feature] / left_count
    right_value = right_sums[position, feature] / (n - left_count)
    return Stump(int(feature), float(columns.midpoints[position, feature]), float(left_value), float(right_value))


def fit_boosted_stumps(
    data: TabularDataset,
    rounds: int = DEFAULT_ROUNDS,
    learning_rate: float = DEFAULT_LEARNING_RATE,
    rng: Optional[RngStream] = None,
    feature_fraction: float = 1.0,
) -> BoostedStumpsModel:
    """Fit *rounds* stumps on the running residuals of *data*.

    Each round scans every midpoint between consecutive distinct values of
    every feature. Gain ties go to the lowest feature index, then the lowest
    split. Boosting stops early once no split reduces the squared loss.
    *rng* is only used when *feature_fraction* < 1 restricts each round to a
    random subset of features.
    """
    if int(rounds) < 1:
        raise ConfigurationError(f"boosting needs at least 1 round, got {rounds}")
    if not 0.0 < learning_rate <= 1.0:
        raise ConfigurationError(f"learning rate must lie in (0, 1], got {learning_rate}")
    if not 0.0 < feature_fraction <= 1.0:
        raise ConfigurationError(f"feature fraction must lie in (0, 1], got {feature_fraction}")
    if feature_fraction < 1.0 and rng is None:
        raise ConfigurationError("feature subsampling requires an rng stream")

    p = data.n_features
    y = data.response
    base_value = float(np.mean(y))
    fitted = np.full(y.shape[0], base_value)
    columns = _SortedColumns(data.inputs)
    subset_size = max(1, int(round(feature_fraction * p)))

    stumps = []
    for round_index in range(int(rounds)):
        allowed = np.ones(p, dtype=bool)
        if subset_size < p:
            chosen = derive_stream(rng, round_index).generator().choice(p, size=subset_size, replace=False)
            allowed = np.zeros(p, dtype=bool)
            allowed[chosen] = True
        stump = _best_stump(columns, y - fitted, allowed)
        if stump is None:
            logger.debug(f"boosting stopped after {round_index} round(s): no split improves the loss")
            break
        stumps.append(stump)
        fitted = fitted + learning_rate * stump(data.inputs)

    return BoostedStumpsModel(
        stumps=tuple(stumps),
        learning_rate=float(learning_rate),
        base_value=base_value,
        rounds=int(rounds),
        n_features=p,
        task_kind=data.task_kind,
    )
