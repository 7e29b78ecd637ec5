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

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.stats

from ..exceptions import ConfigurationError, DimensionMismatchError
from ..inference.report import SelectionReport
from .settings import GroundTruth


class SelectionMetrics(NamedTuple):
    fdp: float
    power: float
    type_i: float


def metrics(decisions: SelectionReport, truth: GroundTruth) -> SelectionMetrics:
    """False-discovery proportion, power and type-I error of one selection.

    Each ratio clamps its denominator at 1, so an empty selection scores 0.
    """
    p = truth.n_features
    if decisions.n_features and decisions.n_features != p:
        raise DimensionMismatchError(f"report covers {decisions.n_features} features, ground truth {p}")
    selected = np.zeros(p, dtype=bool)
    for decision in decisions.decisions:
        if not 0 <= decision.feature_index < p:
            raise DimensionMismatchError(f"decision for feature {decision.feature_index} outside [0, {p})")
        selected[decision.feature_index] = decision.selected

    important = truth.important
    false_hits = int(np.count_nonzero(selected & ~important))
    return SelectionMetrics(
        fdp=false_hits / max(1, int(np.count_nonzero(selected))),
        power=int(np.count_nonzero(selected & important)) / max(1, int(np.count_nonzero(important))),
        type_i=false_hits / max(1, int(np.count_nonzero(~important))),
    )


def auc_from_scores(scores, truth: GroundTruth) -> float:
    """P(random important feature outscores a random null one), ties counting 1/2."""
    scores = np.asarray(scores, dtype=float).reshape(-1)
    if scores.size != truth.n_features:
        raise DimensionMismatchError(f"{scores.size} scores for {truth.n_features} features")
    positives = scores[truth.important]
    negatives = scores[~truth.important]
    if positives.size == 0 or negatives.size == 0:
        raise ConfigurationError("AUC needs at least one important and one null feature")
    # Mann-Whitney U from average ranks
    ranks = scipy.stats.rankdata(np.concatenate([positives, negatives]), method="average")
    u = ranks[: positives.size].sum() - positives.size * (positives.size + 1) / 2.0
    return float(u / (positives.size * negatives.size))


def wasserstein_1d(sample_a, sample_b) -> float:
    """Exact empirical 1-Wasserstein distance between equal-size scalar samples."""
    a = np.sort(np.asarray(sample_a, dtype=float).reshape(-1))
    b = np.sort(np.asarray(sample_b, dtype=float).reshape(-1))
    if a.size != b.size:
        raise DimensionMismatchError(f"samples must have equal length, got {a.size} and {b.size}")
    if a.size == 0:
        raise DimensionMismatchError("samples must not be empty")
    return float(np.mean(np.abs(a - b)))
