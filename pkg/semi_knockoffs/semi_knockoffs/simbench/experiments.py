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

"""Replicated experiments and diagnostic probes on synthetic settings.

Every runner derives one stream per replicate (or per sample size and
seed) from its root stream, so results do not depend on the worker count.
Inside a replicate, child 0 draws the data, child 1 fits the model and
child 2 drives the semi-knockoff draws.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..core.losses import LossFunction, default_loss
from ..core.rng import RngStream, derive_stream
from ..exceptions import ConfigurationError
from ..imputer.oracle import OracleImputer
from ..imputer.pair import ImputerVariant, build_pair, fit_imputer_pair
from ..imputer.stability import stability_probe
from ..inference.paired import paired_losses
from ..inference.pipeline import Lambda, run_semi_knockoffs
from ..inference.report import Method
from ..models.spec import ModelSpec
from ..sampler.draws import draw_semi_knockoff, draw_with_permutations
from .metrics import auc_from_scores, metrics, wasserstein_1d
from .settings import SyntheticSetting, design_oracle, generate, joint_gaussian_oracle

logger = logging.getLogger(__name__)

_DATA_STREAM = 0
_MODEL_STREAM = 1
_DRAW_STREAM = 2


@dataclass(frozen=True)
class MethodConfig:
    method: Method
    level: float
    model: ModelSpec
    lam: Optional[Lambda] = None
    permutations: int = 1
    oracle: bool = False
    loss: Optional[LossFunction] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", Method.parse(self.method) if isinstance(self.method, str) else self.method)

    def describe(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "level": self.level,
            "model": str(self.model),
            "lambda": self.lam,
            "permutations": self.permutations,
            "imputer": ImputerVariant.ORACLE.value if self.oracle else ImputerVariant.ESTIMATED.value,
        }


@dataclass(frozen=True)
class ReplicateRecord:
    replicate: int
    fdp: float
    power: float
    type_i: float
    auc: Optional[float]
    selected: Tuple[int, ...]
    important: Tuple[int, ...]
    decoy_selected: Optional[bool] = None


def _mean(values) -> Optional[float]:
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


@dataclass(frozen=True)
class ExperimentReport:
    """Per-replicate metrics of one setting/method pair and their means."""

    setting: SyntheticSetting
    method_config: MethodConfig
    records: Tuple[ReplicateRecord, ...]
    seed: int
    runtime: float = field(default=0.0, compare=False)

    @property
    def replicate_count(self) -> int:
        return len(self.records)

    @property
    def type_i_error(self) -> float:
        return _mean(r.type_i for r in self.records)

    @property
    def fdr(self) -> float:
        return _mean(r.fdp for r in self.records)

    @property
    def power(self) -> float:
        return _mean(r.power for r in self.records)

    @property
    def auc(self) -> Optional[float]:
        return _mean(r.auc for r in self.records)

    @property
    def decoy_rejection_rate(self) -> Optional[float]:
        return _mean(None if r.decoy_selected is None else float(r.decoy_selected) for r in self.records)

    def aggregates(self) -> Dict[str, Optional[float]]:
        return {
            "type_i_error": self.type_i_error,
            "fdr": self.fdr,
            "power": self.power,
            "auc": self.auc,
            "decoy_rejection_rate": self.decoy_rejection_rate,
        }


def _scores(report) -> np.ndarray:
    if report.method is Method.KNOCKOFF_THRESHOLD:
        return np.array(report.statistics)
    return np.array([1.0 - d.p_value for d in report.decisions])


def _loss_for(config: MethodConfig, data) -> LossFunction:
    return config.loss if config.loss is not None else default_loss(data.task_kind)


def _run_replicate(setting: SyntheticSetting, config: MethodConfig, index: int, stream: RngStream) -> ReplicateRecord:
    data, truth = generate(setting, derive_stream(stream, _DATA_STREAM))
    oracle = joint_gaussian_oracle(truth) if config.oracle else None
    with config.model.session(data, derive_stream(stream, _MODEL_STREAM)) as model:
        report = run_semi_knockoffs(
            data,
            model,
            _loss_for(config, data),
            config.lam,
            config.level,
            config.permutations,
            config.method,
            derive_stream(stream, _DRAW_STREAM),
            oracle=oracle,
        )
    scores = metrics(report, truth)
    auc = None
    if truth.important.any() and not truth.important.all():
        auc = auc_from_scores(_scores(report), truth)
    selected = tuple(report.selected_indices)
    return ReplicateRecord(
        replicate=index,
        fdp=scores.fdp,
        power=scores.power,
        type_i=scores.type_i,
        auc=auc,
        selected=selected,
        important=tuple(int(j) for j in truth.important_indices),
        decoy_selected=None if truth.decoy_index is None else truth.decoy_index in selected,
    )


def _jobs(model: ModelSpec, workers: int) -> int:
    if not model.concurrent_safe and workers > 1:
        logger.warning("external models run one replicate at a time")
        return 1
    return max(1, int(workers))


def run_replicated(
    setting: SyntheticSetting,
    method_config: MethodConfig,
    replicates: int,
    rng: RngStream,
    *,
    workers: int = 1,
) -> ExperimentReport:
    """Draw *replicates* fresh datasets and run the configured method on each."""
    if int(replicates) < 1:
        raise ConfigurationError(f"replicates must be at least 1, got {replicates}")
    if method_config.lam is None:
        method_config = replace(method_config, lam=setting.kind.imputer_lambda)
    started = time.perf_counter()
    logger.info(
        f"Simulating {setting.kind.value} (n={setting.n}, p={setting.p}) x {replicates} replicate(s) "
        f"with {method_config.method.value}"
    )
    records = Parallel(n_jobs=_jobs(method_config.model, workers))(
        delayed(_run_replicate)(setting, method_config, r, derive_stream(rng, r)) for r in range(int(replicates))
    )
    report = ExperimentReport(setting, method_config, tuple(records), rng.root_seed, time.perf_counter() - started)
    logger.info(f"Finished {report.replicate_count} replicate(s) in {report.runtime:.2f}s: fdr={report.fdr:.3f}")
    return report


@dataclass(frozen=True, eq=False)
class DoubleRobustnessProbe:
    """Per-sample loss differences for one null feature.

    estimated_vs_estimated compares the two estimated populations;
    estimated_vs_oracle compares the estimated nu-population with the oracle
    nu-population built from the same permutation.
    """

    feature_index: int
    estimated_vs_estimated: np.ndarray
    estimated_vs_oracle: np.ndarray


def double_robustness_probe(
    setting: SyntheticSetting,
    model_spec: ModelSpec,
    lam: float,
    rng: RngStream,
    *,
    nu_kind: str = "ridge",
    feature_index: int = 0,
) -> DoubleRobustnessProbe:
    """Loss differences behind the double-robustness diagnostic.

    The design must be Gaussian so the oracle nu is exact. With
    *nu_kind* "oracle" the estimated nu is replaced by the oracle one and the
    second vector is identically zero.
    """
    if nu_kind not in ("ridge", "oracle"):
        raise ConfigurationError(f"nu_kind must be 'ridge' or 'oracle', got '{nu_kind}'")
    data, truth = generate(setting, derive_stream(rng, _DATA_STREAM))
    data.check_feature_index(feature_index)
    if truth.important[feature_index]:
        raise ConfigurationError(f"feature {feature_index} is not null in the {setting.kind.value} setting")

    loss = default_loss(data.task_kind)
    nu_oracle = OracleImputer(design_oracle(truth), feature_index)
    estimated = fit_imputer_pair(data, feature_index, lam)
    # only the nu side of these pairs is used
    oracle_side = build_pair(data, feature_index, nu_oracle, estimated.rho, ImputerVariant.ORACLE)
    if nu_kind == "oracle":
        estimated = build_pair(data, feature_index, nu_oracle, estimated.rho, ImputerVariant.ORACLE)

    with model_spec.session(data, derive_stream(rng, _MODEL_STREAM)) as model:
        draw = draw_semi_knockoff(data, estimated, derive_stream(rng, _DRAW_STREAM))
        oracle_draw = draw_with_permutations(data, oracle_side, draw.permutation_one, draw.permutation_two)
        blue = paired_losses(model, loss, draw, data.response)
        one_oracle = paired_losses(model, loss, oracle_draw, data.response).losses_one
    return DoubleRobustnessProbe(feature_index, blue.differences, blue.losses_one - one_oracle)


@dataclass(frozen=True)
class SnapshotRow:
    feature_index: int
    statistic: float
    is_null: bool
    threshold: float


def exchangeability_snapshot(
    setting: SyntheticSetting,
    model_spec: ModelSpec,
    lam: Lambda,
    q: float,
    rng: RngStream,
    *,
    permutations: int = 1,
) -> Tuple[SnapshotRow, ...]:
    """Statistic, null label and knockoff threshold of every feature for one dataset."""
    data, truth = generate(setting, derive_stream(rng, _DATA_STREAM))
    with model_spec.session(data, derive_stream(rng, _MODEL_STREAM)) as model:
        report = run_semi_knockoffs(
            data,
            model,
            default_loss(data.task_kind),
            lam,
            q,
            permutations,
            Method.KNOCKOFF_THRESHOLD,
            derive_stream(rng, _DRAW_STREAM),
        )
    return tuple(
        SnapshotRow(d.feature_index, d.statistic, not bool(truth.important[d.feature_index]), report.threshold)
        for d in report.decisions
    )


@dataclass(frozen=True)
class RatePoint:
    """Medians over seeds of a diagnostic at one sample size."""

    n: int
    null_median: float
    null_values: Tuple[float, ...]
    important_median: Optional[float] = None
    important_values: Tuple[float, ...] = ()


def _first(indices: np.ndarray, what: str) -> int:
    if indices.size == 0:
        raise ConfigurationError(f"setting has no {what} feature")
    return int(indices[0])


def _stability_values(setting: SyntheticSetting, lam: float, stream: RngStream) -> Tuple[float, float]:
    data, truth = generate(setting, stream)
    null_index = _first(truth.null_indices, "null")
    important_index = _first(truth.important_indices, "important")
    return stability_probe(data, null_index, lam), stability_probe(data, important_index, lam)


def _check_sizes(sample_sizes: Sequence[int], seeds: int) -> Tuple[int, ...]:
    sizes = tuple(int(n) for n in sample_sizes)
    if not sizes or any(n < 2 for n in sizes):
        raise ConfigurationError(f"sample sizes must be integers >= 2, got {list(sample_sizes)}")
    if int(seeds) < 1:
        raise ConfigurationError(f"seeds must be at least 1, got {seeds}")
    return sizes


def stability_curve(
    setting: SyntheticSetting,
    sample_sizes: Sequence[int],
    seeds: int,
    lam: float,
    rng: RngStream,
    *,
    workers: int = 1,
) -> Tuple[RatePoint, ...]:
    """Median stability probe of the first null and first important feature per sample size."""
    sizes = _check_sizes(sample_sizes, seeds)
    jobs = [(i, n, s) for i, n in enumerate(sizes) for s in range(int(seeds))]
    values = Parallel(n_jobs=max(1, int(workers)))(
        delayed(_stability_values)(replace(setting, n=n), lam, derive_stream(derive_stream(rng, i), s))
        for i, n, s in jobs
    )
    points = []
    for i, n in enumerate(sizes):
        own = [v for (k, _, _), v in zip(jobs, values) if k == i]
        nulls = tuple(v[0] for v in own)
        importants = tuple(v[1] for v in own)
        points.append(RatePoint(n, float(np.median(nulls)), nulls, float(np.median(importants)), importants))
        logger.info(
            f"stability n={n}: null median {points[-1].null_median:.4g}, "
            f"important median {points[-1].important_median:.4g}"
        )
    return tuple(points)


def _most_exposed_null(data, truth) -> int:
    """Null feature with the largest absolute sample correlation to the response.

    A null feature the model never reads gives identical loss samples, so the
    rate is measured on the one a fitted model is most likely to use.
    """
    nulls = truth.null_indices
    _first(nulls, "null")
    centered = data.inputs[:, nulls] - data.inputs[:, nulls].mean(axis=0)
    response = data.response - data.response.mean()
    scale = np.linalg.norm(centered, axis=0) * np.linalg.norm(response)
    strength = np.abs(centered.T @ response) / np.where(scale > 0, scale, 1.0)
    return int(nulls[int(np.argmax(strength))])


def _wasserstein_value(setting: SyntheticSetting, model_spec: ModelSpec, lam: float, stream: RngStream) -> float:
    data, truth = generate(setting, derive_stream(stream, _DATA_STREAM))
    null_index = _most_exposed_null(data, truth)
    with model_spec.session(data, derive_stream(stream, _MODEL_STREAM)) as model:
        sample = paired_losses(
            model,
            default_loss(data.task_kind),
            draw_semi_knockoff(
                data, fit_imputer_pair(data, null_index, float(lam)), derive_stream(stream, _DRAW_STREAM)
            ),
            data.response,
        )
    return wasserstein_1d(sample.losses_one, sample.losses_two)


def wasserstein_rate(
    setting: SyntheticSetting,
    sample_sizes: Sequence[int],
    seeds: int,
    model_spec: ModelSpec,
    lam: float,
    rng: RngStream,
    *,
    workers: int = 1,
) -> Tuple[RatePoint, ...]:
    """Median 1-Wasserstein distance between the two null-feature loss samples per sample size."""
    sizes = _check_sizes(sample_sizes, seeds)
    jobs = [(i, n, s) for i, n in enumerate(sizes) for s in range(int(seeds))]
    values = Parallel(n_jobs=_jobs(model_spec, workers))(
        delayed(_wasserstein_value)(replace(setting, n=n), model_spec, lam, derive_stream(derive_stream(rng, i), s))
        for i, n, s in jobs
    )
    points = []
    for i, n in enumerate(sizes):
        own = tuple(v for (k, _, _), v in zip(jobs, values) if k == i)
        points.append(RatePoint(n, float(np.median(own)), own))
        logger.info(f"wasserstein n={n}: median {points[-1].null_median:.4g}")
    return tuple(points)

