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

"""Ridge-regularized linear imputers.

Fits minimise (1/n) sum (z_i - theta^T chi_i)^2 + lambda ||theta||^2 on
column-centered data; the intercept is the target mean and is not
penalized.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from ..exceptions import ConfigurationError, DimensionMismatchError, SingularSystemError

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 0.1
GCV_GRID = tuple(float(v) for v in np.logspace(-4, 1, 11))


class RegressorSpec(str, Enum):
    WITHOUT_RESPONSE = "without_response"
    WITH_RESPONSE = "with_response"


@dataclass(frozen=True, eq=False)
class RidgeImputer:
    coefficients: np.ndarray
    intercept: float
    lam: float
    regressor_spec: RegressorSpec
    training_column_means: np.ndarray

    @property
    def n_regressors(self) -> int:
        return self.coefficients.shape[0]

    def predict(self, regressors: np.ndarray) -> np.ndarray:
        """intercept + coefficients . (row - training_column_means), row-wise."""
        regressors = np.asarray(regressors, dtype=float)
        if regressors.ndim != 2 or regressors.shape[1] != self.n_regressors:
            raise DimensionMismatchError(
                f"imputer expects {self.n_regressors} regressor columns, got shape {regressors.shape}"
            )
        return self.intercept + (regressors - self.training_column_means) @ self.coefficients


def _as_design(targets, regressors) -> tuple:
    z = np.asarray(targets, dtype=float)
    chi = np.asarray(regressors, dtype=float)
    if z.ndim != 1:
        raise DimensionMismatchError(f"targets must be a vector, got shape {z.shape}")
    if chi.ndim == 1:
        chi = chi[:, None]
    if chi.ndim != 2 or chi.shape[0] != z.shape[0]:
        raise DimensionMismatchError(f"regressors have shape {chi.shape} but there are {z.shape[0]} targets")
    if z.shape[0] < 1:
        raise DimensionMismatchError("cannot fit on zero rows")
    return z, chi


def _solve_rank_deficient(gram: np.ndarray, rhs: np.ndarray, strict: bool) -> np.ndarray:
    if strict:
        raise SingularSystemError(
            "regressor Gram matrix is singular at lambda = 0; use lambda > 0 or remove collinear columns"
        )
    logger.warning("Gram matrix is rank-deficient at lambda = 0; falling back to the pseudo-inverse solution")
    return scipy.linalg.pinvh(gram) @ rhs


def fit_ridge(
    targets,
    regressors,
    lam: float,
    *,
    regressor_spec: RegressorSpec = RegressorSpec.WITHOUT_RESPONSE,
    strict: bool = False,
) -> RidgeImputer:
    """Fit a ridge imputer of *targets* on *regressors*.

    Solves (chi_c^T chi_c / n + lam I) theta = chi_c^T z_c / n by Cholesky.
    At lam = 0 a rank-deficient Gram matrix falls back to the pseudo-inverse
    with a warning, or raises SingularSystemError when *strict*.
    """
    if not np.isfinite(lam) or lam < 0:
        raise ConfigurationError(f"lambda must be a finite value >= 0, got {lam}")
    z, chi = _as_design(targets, regressors)
    n, k = chi.shape

    column_means = chi.mean(axis=0)
    target_mean = float(z.mean())
    if k == 0:
        return RidgeImputer(np.zeros(0), target_mean, float(lam), RegressorSpec(regressor_spec), column_means)

    chi_c = chi - column_means
    z_c = z - target_mean
    gram = chi_c.T @ chi_c / n + lam * np.eye(k)
    rhs = chi_c.T @ z_c / n

    if lam == 0 and np.linalg.matrix_rank(chi_c) < k:
        coefficients = _solve_rank_deficient(gram, rhs, strict)
    else:
        try:
            coefficients = scipy.linalg.cho_solve(scipy.linalg.cho_factor(gram, lower=True), rhs)
        except scipy.linalg.LinAlgError:
            coefficients = _solve_rank_deficient(gram, rhs, strict)

    return RidgeImputer(
        coefficients=coefficients,
        intercept=target_mean,
        lam=float(lam),
        regressor_spec=RegressorSpec(regressor_spec),
        training_column_means=column_means,
    )


def select_lambda_gcv(targets, regressors, grid: Optional[Sequence[float]] = None) -> float:
    """Pick lambda on *grid* by generalized cross-validation.

    GCV(lam) = n * RSS(lam) / (n - df(lam))^2 with df the trace of the hat
    matrix, evaluated through one SVD of the centered design. Ties go to the
    smallest lambda.
    """
    grid = tuple(GCV_GRID if grid is None else grid)
    if not grid or any(g <= 0 for g in grid):
        raise ConfigurationError("GCV grid must be a non-empty list of positive values")
    z, chi = _as_design(targets, regressors)
    n = z.shape[0]
    if chi.shape[1] == 0:
        return min(grid)

    chi_c = chi - chi.mean(axis=0)
    z_c = z - z.mean()
    u, singular, _ = np.linalg.svd(chi_c, full_matrices=False)
    projected = u.T @ z_c
    outside = float(z_c @ z_c - projected @ projected)

    best_lam, best_score = None, np.inf
    for lam in sorted(grid):
        shrink = singular**2 / (singular**2 + n * lam)
        rss = outside + float(np.sum(((1.0 - shrink) * projected) ** 2))
        dof = float(np.sum(shrink))
        score = n * rss / max(n - dof, 1e-12) ** 2
        if score < best_score:
            best_lam, best_score = lam, score
    logger.debug(f"GCV selected lambda={best_lam} (score {best_score:.6g})")
    return float(best_lam)
