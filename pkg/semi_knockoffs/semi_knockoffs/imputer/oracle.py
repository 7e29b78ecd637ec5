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

"""Exact Gaussian conditional means, used as oracle imputers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import scipy.linalg

from ..exceptions import CovarianceError, DimensionMismatchError
from .ridge import RegressorSpec


@dataclass(frozen=True, eq=False)
class GaussianOracle:
    """N(mean, covariance) over p coordinates (p + 1 when y is appended last)."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.covariance, dtype=float)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise DimensionMismatchError(f"mean of shape {mean.shape} does not match covariance {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12):
            raise CovarianceError("covariance matrix is not symmetric")
        cov = (cov + cov.T) / 2.0
        smallest = float(np.linalg.eigvalsh(cov)[0])
        if smallest <= 0:
            raise CovarianceError(f"covariance matrix is not positive definite (smallest eigenvalue {smallest:.3g})")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dimension(self) -> int:
        return self.mean.size

    def marginal(self, indices) -> "GaussianOracle":
        idx = np.asarray(indices, dtype=int)
        return GaussianOracle(self.mean[idx], self.covariance[np.ix_(idx, idx)])

    def conditional_weights(self, target_index: int) -> Tuple[np.ndarray, float]:
        """Weights w with E[X^t | X^{-t}] = mu^t + w . (x^{-t} - mu^{-t}), and the conditional sd."""
        if not 0 <= target_index < self.dimension:
            raise DimensionMismatchError(f"target index {target_index} out of range [0, {self.dimension})")
        others = np.delete(np.arange(self.dimension), target_index)
        variance = self.covariance[target_index, target_index]
        if others.size == 0:
            return np.zeros(0), float(np.sqrt(variance))
        cross = self.covariance[others, target_index]
        weights = scipy.linalg.solve(self.covariance[np.ix_(others, others)], cross, assume_a="pos")
        return weights, float(np.sqrt(max(variance - weights @ cross, 0.0)))


def oracle_conditional_mean(oracle: GaussianOracle, conditioning_values, target_index: int) -> Tuple[float, float]:
    """Exact conditional mean and standard deviation of one coordinate.

    *conditioning_values* lists every other coordinate in index order.
    """
    values = np.asarray(conditioning_values, dtype=float).reshape(-1)
    if values.size != oracle.dimension - 1:
        raise DimensionMismatchError(
            f"conditioning needs {oracle.dimension - 1} values for target {target_index}, got {values.size}"
        )
    weights, sd = oracle.conditional_weights(target_index)
    others = np.delete(np.arange(oracle.dimension), target_index)
    prediction = oracle.mean[target_index] + (values - oracle.mean[others]) @ weights
    return float(prediction), sd


@dataclass(frozen=True, eq=False)
class OracleImputer:
    """Conditional-mean predictor backed by a GaussianOracle.

    For regressor_spec WITH_RESPONSE the oracle is the joint law of (X, y)
    with y as its last coordinate.
    """

    oracle: GaussianOracle
    target_index: int
    regressor_spec: RegressorSpec = RegressorSpec.WITHOUT_RESPONSE
    _weights: np.ndarray = field(init=False, repr=False)
    conditional_sd: float = field(init=False)

    def __post_init__(self) -> None:
        weights, sd = self.oracle.conditional_weights(self.target_index)
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "conditional_sd", sd)

    def predict(self, regressors: np.ndarray) -> np.ndarray:
        regressors = np.asarray(regressors, dtype=float)
        expected = self.oracle.dimension - 1
        if regressors.ndim != 2 or regressors.shape[1] != expected:
            raise DimensionMismatchError(f"oracle imputer expects {expected} regressor columns, got {regressors.shape}")
        others = np.delete(np.arange(self.oracle.dimension), self.target_index)
        return self.oracle.mean[self.target_index] + (regressors - self.oracle.mean[others]) @ self._weights


def oracle_imputers(joint: GaussianOracle, feature_index: int) -> Tuple[OracleImputer, OracleImputer]:
    """(nu, rho) oracles for *feature_index* from the joint law of (X, y)."""
    p = joint.dimension - 1
    if p < 1:
        raise DimensionMismatchError("joint oracle must cover at least one feature and the response")
    nu = OracleImputer(joint.marginal(range(p)), feature_index, RegressorSpec.WITHOUT_RESPONSE)
    rho = OracleImputer(joint, feature_index, RegressorSpec.WITH_RESPONSE)
    return nu, rho
