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

"""End-to-end semi-knockoff inference for a pre-trained model."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from ..core.dataset import TabularDataset
from ..core.losses import LossFunction
from ..core.model import PredictiveModel
from ..core.rng import RngStream, derive_stream
from ..exceptions import ConfigurationError, FeatureProcessingError, SemiKnockoffError
from ..imputer.oracle import GaussianOracle, oracle_imputers
from ..imputer.pair import ImputerPair, ImputerVariant, fit_imputer_pair
from ..imputer.ridge import select_lambda_gcv
from ..sampler.draws import draw_batch, oracle_pair
from .paired import PairedLossSample, paired_losses
from .report import FeatureDecision, Method, SelectionReport
from .selection import benjamini_hochberg, knockoff_threshold
from .rank_tests import sign_test, wilcoxon_signed_rank

logger = logging.getLogger(__name__)

LAMBDA_GCV = "gcv"

Lambda = Union[float, str]


@dataclass(frozen=True)
class FeatureOutcome:
    feature_index: int
    statistic: float
    p_value: Optional[float]


def _check_lambda(lam: Lambda) -> None:
    if isinstance(lam, str) and lam != LAMBDA_GCV:
        raise ConfigurationError(f"lambda must be a number or '{LAMBDA_GCV}', got '{lam}'")


def _check_oracle(data: TabularDataset, oracle: Optional[GaussianOracle]) -> None:
    if oracle is not None and oracle.dimension != data.n_features + 1:
        raise ConfigurationError(
            f"joint oracle covers {oracle.dimension} coordinates; expected {data.n_features + 1} (features + response)"
        )


def resolve_lambda(data: TabularDataset, feature_index: int, lam: Lambda) -> float:
    """A numeric lambda, or the GCV choice for the nu regression of this feature."""
    _check_lambda(lam)
    if isinstance(lam, str):
        return select_lambda_gcv(data.inputs[:, feature_index], data.other_columns(feature_index))
    return float(lam)


def feature_pair(
    data: TabularDataset,
    feature_index: int,
    lam: Lambda,
    oracle: Optional[GaussianOracle] = None,
    strict: bool = False,
) -> ImputerPair:
    """Estimated pair, or the theoretical pair when a joint (X, y) oracle is given."""
    _check_oracle(data, oracle)
    if oracle is not None:
        nu, rho = oracle_imputers(oracle, feature_index)
        return oracle_pair(data, nu, rho)
    return fit_imputer_pair(data, feature_index, resolve_lambda(data, feature_index, lam), strict=strict)


def feature_losses(
    data: TabularDataset,
    model: PredictiveModel,
    loss: LossFunction,
    feature_index: int,
    lam: Lambda,
    permutations: int,
    rng: RngStream,
    oracle: Optional[GaussianOracle] = None,
    strict: bool = False,
) -> PairedLossSample:
    pair = feature_pair(data, feature_index, lam, oracle, strict)
    draws = draw_batch(data, pair, rng, permutations)
    return paired_losses(model, loss, draws, data.response)


def _evaluate_feature(
    data, model, loss, feature_index, lam, permutations, method, rng, oracle, strict
) -> FeatureOutcome:
    try:
        sample = feature_losses(data, model, loss, feature_index, lam, permutations, rng, oracle, strict)
        p_value = None
        if method is Method.SIGN_TEST:
            p_value = sign_test(sample.differences)
        elif method.yields_p_values:
            p_value = wilcoxon_signed_rank(sample.differences)
    except SemiKnockoffError as exc:
        raise FeatureProcessingError(feature_index, exc) from exc
    logger.debug(f"feature {feature_index}: statistic={sample.statistic:.6g} p={p_value}")
    return FeatureOutcome(feature_index, sample.statistic, p_value)


def effective_workers(model: PredictiveModel, workers: int) -> int:
    workers = max(1, int(workers))
    if workers > 1 and not model.concurrent_safe:
        logger.warning(f"model '{model.identifier}' does not support concurrent calls; running features serially")
        return 1
    return workers


def run_semi_knockoffs(
    data: TabularDataset,
    model: PredictiveModel,
    loss: LossFunction,
    lam: Lambda,
    q: float,
    permutations_per_feature: int,
    method: Union[Method, str],
    rng: RngStream,
    *,
    workers: int = 1,
    features: Optional[Sequence[int]] = None,
    oracle: Optional[GaussianOracle] = None,
    strict: bool = False,
) -> SelectionReport:
    """Test every feature (or *features*) of *data* against *model*.

    Feature j uses the stream derived from *rng* at j, so the report does not
    depend on *workers* or on which subset is tested. With *oracle* (the
    joint Gaussian law of (X, y)) the theoretical conditional means replace
    the fitted imputers.
    """
    method = Method.parse(method) if isinstance(method, str) else Method(method)
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise ConfigurationError(f"target level must lie in (0, 1], got {q}")
    if int(permutations_per_feature) < 1:
        raise ConfigurationError(f"permutations per feature must be at least 1, got {permutations_per_feature}")

    indices = list(range(data.n_features)) if features is None else sorted(set(int(j) for j in features))
    if not indices:
        raise ConfigurationError("no features to test")
    for j in indices:
        data.check_feature_index(j)
    _check_lambda(lam)
    _check_oracle(data, oracle)

    n_jobs = effective_workers(model, workers)
    started = time.perf_counter()
    logger.info(
        f"Running {method.value} on {len(indices)} feature(s): n={data.n_samples}, level={q}, "
        f"permutations={permutations_per_feature}, workers={n_jobs}"
    )
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_evaluate_feature)(
            data, model, loss, j, lam, int(permutations_per_feature), method, derive_stream(rng, j), oracle, strict
        )
        for j in indices
    )

    statistics = np.array([o.statistic for o in outcomes])
    threshold = None
    if method is Method.KNOCKOFF_THRESHOLD:
        threshold, selected = knockoff_threshold(statistics, q)
    elif method is Method.BH_ON_WILCOXON:
        selected = benjamini_hochberg([o.p_value for o in outcomes], q)
    else:
        selected = np.array([o.p_value <= q for o in outcomes], dtype=bool)

    decisions = tuple(
        FeatureDecision(
            feature_index=o.feature_index,
            name=data.feature_name(o.feature_index),
            statistic=o.statistic,
            p_value=o.p_value,
            selected=bool(s),
            method=method,
        )
        for o, s in zip(outcomes, selected)
    )
    logger.info(
        f"Selected {int(np.sum(selected))} of {len(indices)} feature(s) in {time.perf_counter() - started:.2f}s"
    )
    return SelectionReport(
        decisions=decisions,
        threshold=threshold,
        target_level=q,
        method=method,
        seed=rng.root_seed,
        permutations=int(permutations_per_feature),
        variant=ImputerVariant.ORACLE if oracle is not None else ImputerVariant.ESTIMATED,
        n_features=data.n_features,
    )
