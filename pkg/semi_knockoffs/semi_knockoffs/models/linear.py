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

"""Linear and logistic models fitted by ridge-penalized least squares or IRLS."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
import scipy.linalg
import scipy.special

from ..core.dataset import TabularDataset, TaskKind
from ..core.model import PredictiveModel
from ..exceptions import ConfigurationError, ConvergenceError, DimensionMismatchError, SeparationError
from ..imputer.ridge import fit_ridge

logger = logging.getLogger(__name__)

MAX_IRLS_ITERATIONS = 100
GRADIENT_TOLERANCE = 1e-8
SEPARATION_LOSS = 1e-12
_MAX_HALVINGS = 30


class Link(str, Enum):
    IDENTITY = "identity"
    LOGISTIC = "logistic"


@dataclass(frozen=True, eq=False)
class LinearModel(PredictiveModel):
    coefficients: np.ndarray
    intercept: float
    link: Link = Link.IDENTITY

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients, dtype=float).reshape(-1)
        if not (np.all(np.isfinite(coefficients)) and np.isfinite(self.intercept)):
            raise ConfigurationError("linear model parameters must be finite")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "link", Link(self.link))

    @property
    def identifier(self) -> str:
        return f"linear[{self.link.value}, p={self.coefficients.size}]"

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=float)
        if inputs.ndim != 2 or inputs.shape[1] != self.coefficients.size:
            raise DimensionMismatchError(
                f"linear model expects {self.coefficients.size} columns, got shape {inputs.shape}"
            )
        scores = self.intercept + inputs @ self.coefficients
        if self.link is Link.LOGISTIC:
            return scipy.special.expit(scores)
        return scores


def _logistic_objective(design: np.ndarray, y: np.ndarray, beta: np.ndarray, penalty: np.ndarray) -> float:
    scores = design @ beta
    # mean of log(1 + e^s) - y s
    return float(np.mean(np.logaddexp(0.0, scores) - y * scores) + beta @ (penalty * beta) / 2.0)


def _raise_separation(objective: float, iterations: int) -> None:
    raise SeparationError(
        f"classes are perfectly separated (training loss {objective:.3g} after {iterations} iterations); "
        "use ridge_lambda > 0"
    )


def _fit_logistic(inputs: np.ndarray, y: np.ndarray, ridge_lambda: float) -> LinearModel:
    n, p = inputs.shape
    design = np.column_stack([np.ones(n), inputs])
    # gradient of lambda ||beta||^2 is 2 lambda beta; intercept unpenalized
    penalty = np.full(p + 1, 2.0 * ridge_lambda)
    penalty[0] = 0.0
    beta = np.zeros(p + 1)
    objective = _logistic_objective(design, y, beta, penalty)

    for iteration in range(1, MAX_IRLS_ITERATIONS + 1):
        prob = scipy.special.expit(design @ beta)
        gradient = design.T @ (prob - y) / n + penalty * beta
        if np.max(np.abs(gradient)) < GRADIENT_TOLERANCE:
            if ridge_lambda == 0 and np.all((prob > 0.5) == (y > 0.5)):
                # a finite maximiser cannot classify every point correctly
                _raise_separation(objective, iteration - 1)
            logger.debug(f"IRLS converged after {iteration - 1} iteration(s)")
            return LinearModel(beta[1:], beta[0], Link.LOGISTIC)

        weights = prob * (1.0 - prob)
        hessian = (design * weights[:, None]).T @ design / n + np.diag(penalty)
        try:
            step = scipy.linalg.solve(hessian, gradient, assume_a="pos")
        except (scipy.linalg.LinAlgError, ValueError):
            step = scipy.linalg.pinvh(hessian) @ gradient

        # damped Newton: halve the step until the objective does not increase
        scale = 1.0
        for _ in range(_MAX_HALVINGS):
            candidate = beta - scale * step
            candidate_objective = _logistic_objective(design, y, candidate, penalty)
            if candidate_objective <= objective:
                break
            scale /= 2.0
        else:
            candidate, candidate_objective = beta, objective

        beta, objective = candidate, candidate_objective
        if ridge_lambda == 0 and objective < SEPARATION_LOSS:
            _raise_separation(objective, iteration)

    raise ConvergenceError(
        f"logistic IRLS did not converge in {MAX_IRLS_ITERATIONS} iterations", MAX_IRLS_ITERATIONS
    )


def fit_linear(
    data: TabularDataset,
    ridge_lambda: float,
    link: Optional[Union[Link, str]] = None,
) -> LinearModel:
    """Fit a linear model to *data*.

    The link defaults to logistic for binary classification and identity
    otherwise. The identity link is a ridge fit with unpenalized intercept.
    """
    if not np.isfinite(ridge_lambda) or ridge_lambda < 0:
        raise ConfigurationError(f"ridge_lambda must be a finite value >= 0, got {ridge_lambda}")
    if link is None:
        link = Link.LOGISTIC if data.task_kind is TaskKind.BINARY_CLASSIFICATION else Link.IDENTITY
    link = Link(link)

    if link is Link.LOGISTIC:
        if data.task_kind is not TaskKind.BINARY_CLASSIFICATION:
            raise ConfigurationError("logistic link requires a binary response")
        return _fit_logistic(data.inputs, data.response, float(ridge_lambda))

    ridge = fit_ridge(data.response, data.inputs, ridge_lambda)
    intercept = ridge.intercept - float(ridge.training_column_means @ ridge.coefficients)
    return LinearModel(ridge.coefficients, intercept, Link.IDENTITY)
