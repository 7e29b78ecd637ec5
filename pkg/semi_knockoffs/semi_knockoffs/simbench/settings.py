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

"""Synthetic data generators with known ground truth."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..core.dataset import TabularDataset
from ..core.rng import RngStream, derive_stream
from ..exceptions import ConfigurationError, CovarianceError, DatasetError
from ..imputer.oracle import GaussianOracle
from ..imputer.ridge import DEFAULT_LAMBDA

logger = logging.getLogger(__name__)

MASKED_NOISE_SCALE = 0.5
DR_COEFFICIENTS = (0.8, 0.6, 0.4, 0.2)
DR_NOISE_VARIANCE = 0.5
DR_CORRELATION = 0.5
BLOCK_SIZE = 5
T_DEGREES_OF_FREEDOM = 3
INJECTED_COLUMN = "injected_null"
# imputer ridge penalty for settings whose null features sit next to a strong signal
LOW_SHRINKAGE_LAMBDA = 1e-4


class SettingKind(str, Enum):
    ADJACENT_SUPPORT = "adjacent_support"
    MASKED_CORRELATION = "masked_correlation"
    HEAVY_TAILS = "heavy_tails"
    DR_NONLINEAR = "dr_nonlinear"
    STABILITY_BLOCKS = "stability_blocks"

    @classmethod
    def parse(cls, name: str) -> "SettingKind":
        aliases = {
            "adjacent": cls.ADJACENT_SUPPORT,
            "masked": cls.MASKED_CORRELATION,
            "heavy": cls.HEAVY_TAILS,
            "dr": cls.DR_NONLINEAR,
            "stability": cls.STABILITY_BLOCKS,
        }
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError as exc:
            raise ConfigurationError(f"unknown setting '{name}' (choose from {', '.join(aliases)})") from exc

    @property
    def imputer_lambda(self) -> float:
        """Default imputer penalty when a run does not name one.

        A shrunken nu leaves part of a null feature's signal-correlated
        component unexplained and rho recovers it through the response, so
        the two draws stop being exchangeable. Settings with a null feature
        strongly tied to a used feature run with a near-unpenalized fit.
        """
        if self in (SettingKind.MASKED_CORRELATION, SettingKind.DR_NONLINEAR):
            return LOW_SHRINKAGE_LAMBDA
        return DEFAULT_LAMBDA


@dataclass(frozen=True)
class SyntheticSetting:
    kind: SettingKind
    n: int
    p: int
    correlation_rho: float = 0.6
    noise_sd: float = 1.0
    sparsity: float = 0.25
    stream: Optional[RngStream] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SettingKind.parse(self.kind))
        if self.n < 2:
            raise ConfigurationError(f"setting needs n >= 2, got {self.n}")
        if self.p < 1:
            raise ConfigurationError(f"setting needs p >= 1, got {self.p}")
        if not -1.0 < self.correlation_rho < 1.0:
            raise ConfigurationError(f"AR(1) correlation must lie in (-1, 1), got {self.correlation_rho}")
        if self.noise_sd < 0:
            raise ConfigurationError(f"noise_sd must be >= 0, got {self.noise_sd}")
        if not 0.0 < self.sparsity <= 1.0:
            raise ConfigurationError(f"sparsity must lie in (0, 1], got {self.sparsity}")
        if self.kind is SettingKind.MASKED_CORRELATION and self.p < 2:
            raise ConfigurationError("masked_correlation needs p >= 2")
        if self.kind is SettingKind.DR_NONLINEAR and self.p < len(DR_COEFFICIENTS) + 1:
            raise ConfigurationError(f"dr_nonlinear needs p >= {len(DR_COEFFICIENTS) + 1}")

    @property
    def support_size(self) -> int:
        return max(1, int(np.floor(self.sparsity * self.p)))


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Generating support and, for linear-Gaussian settings, the exact law of (X, y).

    decoy_index marks the null column rewritten to correlate with the
    relevant one in the masked-correlation setting.
    """

    important: np.ndarray
    generating_coefficients: Optional[np.ndarray] = None
    design_covariance: Optional[np.ndarray] = None
    noise_sd: Optional[float] = None
    decoy_index: Optional[int] = None
    linear_gaussian: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        important = np.asarray(self.important, dtype=bool).reshape(-1)
        if important.size == 0:
            raise ConfigurationError("ground truth needs at least one feature")
        object.__setattr__(self, "important", important)

    @property
    def n_features(self) -> int:
        return self.important.size

    @property
    def important_indices(self) -> np.ndarray:
        return np.flatnonzero(self.important)

    @property
    def null_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.important)


def ar1_covariance(p: int, rho: float) -> np.ndarray:
    """Sigma_ij = rho^|i - j|."""
    distance = np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    return rho**distance


def symmetric_sqrt(covariance: np.ndarray) -> np.ndarray:
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    if eigenvalues[0] <= 0:
        raise CovarianceError(f"covariance is not positive definite (smallest eigenvalue {eigenvalues[0]:.3g})")
    return (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T


def _design(setting: SyntheticSetting, rng: RngStream, heavy: bool = False, rho: Optional[float] = None):
    covariance = ar1_covariance(setting.p, setting.correlation_rho if rho is None else rho)
    generator = derive_stream(rng, 0).generator()
    if heavy:
        z = generator.standard_t(T_DEGREES_OF_FREEDOM, size=(setting.n, setting.p))
    else:
        z = generator.standard_normal((setting.n, setting.p))
    return z @ symmetric_sqrt(covariance), covariance


def _noise(rng: RngStream, n: int) -> np.ndarray:
    return derive_stream(rng, 2).generator().standard_normal(n)


def _adjacent(setting: SyntheticSetting, rng: RngStream, heavy: bool):
    inputs, covariance = _design(setting, rng, heavy=heavy)
    k = setting.support_size
    beta = np.zeros(setting.p)
    beta[:k] = derive_stream(rng, 1).generator().uniform(1.0, 2.0, size=k)
    response = inputs @ beta + setting.noise_sd * _noise(rng, setting.n)
    truth = GroundTruth(
        important=beta != 0,
        generating_coefficients=beta,
        design_covariance=covariance,
        noise_sd=setting.noise_sd,
        linear_gaussian=not heavy,
    )
    return inputs, response, truth


def _masked(setting: SyntheticSetting, rng: RngStream):
    inputs, covariance = _design(setting, rng)
    generator = derive_stream(rng, 1).generator()
    relevant = int(generator.integers(1, setting.p))
    decoy = relevant - 1
    inputs[:, decoy] = inputs[:, relevant] + MASKED_NOISE_SCALE * generator.standard_normal(setting.n)
    response = inputs[:, relevant] + MASKED_NOISE_SCALE * _noise(rng, setting.n)

    # the rewritten column copies the relevant column's covariances
    covariance = covariance.copy()
    covariance[decoy, :] = covariance[relevant, :]
    covariance[:, decoy] = covariance[:, relevant]
    covariance[decoy, decoy] = 1.0 + MASKED_NOISE_SCALE**2
    beta = np.zeros(setting.p)
    beta[relevant] = 1.0
    truth = GroundTruth(
        important=beta != 0,
        generating_coefficients=beta,
        design_covariance=covariance,
        noise_sd=MASKED_NOISE_SCALE,
        decoy_index=decoy,
        linear_gaussian=True,
    )
    return inputs, response, truth


def _dr_nonlinear(setting: SyntheticSetting, rng: RngStream):
    inputs, covariance = _design(setting, rng)
    coefficients = np.zeros(setting.p)
    coefficients[1 : 1 + len(DR_COEFFICIENTS)] = DR_COEFFICIENTS
    noise_sd = float(np.sqrt(DR_NOISE_VARIANCE))
    response = inputs @ coefficients + np.sin(inputs[:, 1]) + noise_sd * _noise(rng, setting.n)
    truth = GroundTruth(
        important=coefficients != 0,
        generating_coefficients=coefficients,
        design_covariance=covariance,
        noise_sd=noise_sd,
        linear_gaussian=False,
        metadata={"noise_variance": DR_NOISE_VARIANCE},
    )
    return inputs, response, truth


def _stability_blocks(setting: SyntheticSetting, rng: RngStream):
    inputs, covariance = _design(setting, rng)
    generator = derive_stream(rng, 1).generator()
    n_blocks_available = max(1, setting.p // BLOCK_SIZE)
    n_blocks = min(n_blocks_available, max(1, int(np.ceil(setting.support_size / BLOCK_SIZE))))
    beta = np.zeros(setting.p)
    for block in np.sort(generator.choice(n_blocks_available, size=n_blocks, replace=False)):
        start = int(block) * BLOCK_SIZE
        stop = min(setting.p, start + BLOCK_SIZE)
        beta[start:stop] = generator.uniform(1.0, 2.0, size=stop - start)
    signal = inputs @ beta
    noise_sd = float(np.linalg.norm(signal) / (2.0 * np.sqrt(setting.n)))
    response = signal + noise_sd * _noise(rng, setting.n)
    truth = GroundTruth(
        important=beta != 0,
        generating_coefficients=beta,
        design_covariance=covariance,
        noise_sd=noise_sd,
        linear_gaussian=True,
    )
    return inputs, response, truth


def generate(setting: SyntheticSetting, rng: Optional[RngStream] = None) -> Tuple[TabularDataset, GroundTruth]:
    """Draw one dataset from *setting*; *rng* defaults to the setting's own stream."""
    rng = rng if rng is not None else setting.stream
    if rng is None:
        raise ConfigurationError("generate needs an rng stream")
    kind = setting.kind
    if kind is SettingKind.ADJACENT_SUPPORT:
        inputs, response, truth = _adjacent(setting, rng, heavy=False)
    elif kind is SettingKind.HEAVY_TAILS:
        inputs, response, truth = _adjacent(setting, rng, heavy=True)
    elif kind is SettingKind.MASKED_CORRELATION:
        inputs, response, truth = _masked(setting, rng)
    elif kind is SettingKind.DR_NONLINEAR:
        inputs, response, truth = _dr_nonlinear(setting, rng)
    else:
        inputs, response, truth = _stability_blocks(setting, rng)
    return TabularDataset(inputs, response), truth


def joint_gaussian_oracle(truth: GroundTruth) -> GaussianOracle:
    """Zero-mean Gaussian law of (X, y) for a linear-Gaussian ground truth.

    Cov = [[C, C beta], [beta^T C, beta^T C beta + sigma^2]].
    """
    if not truth.linear_gaussian or truth.design_covariance is None or truth.generating_coefficients is None:
        raise ConfigurationError("an exact joint oracle exists only for linear-Gaussian settings")
    design = truth.design_covariance
    beta = truth.generating_coefficients
    cross = design @ beta
    p = design.shape[0]
    joint = np.empty((p + 1, p + 1))
    joint[:p, :p] = design
    joint[:p, p] = cross
    joint[p, :p] = cross
    joint[p, p] = float(beta @ cross) + float(truth.noise_sd) ** 2
    return GaussianOracle(np.zeros(p + 1), joint)


def design_oracle(truth: GroundTruth) -> GaussianOracle:
    """Zero-mean Gaussian law of X alone; exact whenever the design is Gaussian."""
    if truth.design_covariance is None:
        raise ConfigurationError("ground truth carries no design covariance")
    return GaussianOracle(np.zeros(truth.n_features), truth.design_covariance)


def _standardize(values: np.ndarray, what: str) -> np.ndarray:
    sd = values.std(axis=0)
    if np.any(sd <= 0):
        raise DatasetError(f"{what} is constant and cannot be standardized")
    return (values - values.mean(axis=0)) / sd


def inject_correlated_null(
    data: TabularDataset, target_correlation: float, rng: RngStream
) -> Tuple[TabularDataset, int]:
    """Append a null column correlated at *target_correlation* with the mean of the inputs.

    The column depends on the inputs and independent noise only, so it is
    conditionally independent of the response given the original columns.
    """
    c = float(target_correlation)
    if not -1.0 < c < 1.0:
        raise ConfigurationError(f"target correlation must lie in (-1, 1), got {c}")
    standardized = _standardize(data.inputs, "an input column")
    mean_column = _standardize(standardized.mean(axis=1), "the mean of the standardized inputs")
    noise = derive_stream(rng, 0).generator().standard_normal(data.n_samples)
    injected = _standardize(c * mean_column + np.sqrt(1.0 - c**2) * noise, "the injected column")

    names = [data.feature_name(j) for j in range(data.n_features)]
    name = INJECTED_COLUMN
    while name in names:
        name = "_" + name
    index = data.n_features
    augmented = data.with_inputs(np.column_stack([data.inputs, injected]), column_names=names + [name])
    logger.info(f"Injected null column '{name}' at index {index} (target correlation {c})")
    return augmented, index
