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

"""Loss functions and elementwise loss evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..exceptions import ConfigurationError, DimensionMismatchError, ModelError, NonFiniteValueError
from .dataset import TaskKind
from .model import PredictiveModel

DEFAULT_CLAMP_EPS = 1e-12


class LossKind(str, Enum):
    SQUARED_ERROR = "squared_error"
    CROSS_ENTROPY = "cross_entropy"


@dataclass(frozen=True)
class LossFunction:
    """l(u, y) for a prediction u and a target y.

    Cross-entropy clamps predictions to [clamp_eps, 1 - clamp_eps] so it is
    finite everywhere.
    """

    kind: LossKind = LossKind.SQUARED_ERROR
    clamp_eps: float = DEFAULT_CLAMP_EPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", LossKind(self.kind))
        if not 0.0 < self.clamp_eps < 0.5:
            raise ConfigurationError(f"clamp_eps must lie in (0, 0.5), got {self.clamp_eps}")

    @classmethod
    def squared_error(cls) -> "LossFunction":
        return cls(LossKind.SQUARED_ERROR)

    @classmethod
    def cross_entropy(cls, clamp_eps: float = DEFAULT_CLAMP_EPS) -> "LossFunction":
        return cls(LossKind.CROSS_ENTROPY, clamp_eps)

    @classmethod
    def from_name(cls, name: Union[str, LossKind]) -> "LossFunction":
        try:
            return cls(LossKind(name))
        except ValueError as exc:
            choices = ", ".join(k.value for k in LossKind)
            raise ConfigurationError(f"unknown loss '{name}' (choose from {choices})") from exc

    def __call__(self, predictions, targets) -> np.ndarray:
        u = np.asarray(predictions, dtype=float)
        y = np.asarray(targets, dtype=float)
        if self.kind is LossKind.SQUARED_ERROR:
            return (u - y) ** 2
        prob = np.clip(u, self.clamp_eps, 1.0 - self.clamp_eps)
        return -(y * np.log(prob) + (1.0 - y) * np.log1p(-prob))


def evaluate_loss(model: PredictiveModel, loss: LossFunction, inputs: np.ndarray, response: np.ndarray) -> np.ndarray:
    """Per-sample losses l(m(x_i), y_i) for every row of *inputs*."""
    inputs = np.asarray(inputs, dtype=float)
    response = np.asarray(response, dtype=float)
    if inputs.ndim != 2:
        raise DimensionMismatchError(f"inputs must be a matrix, got shape {inputs.shape}")
    if response.shape != (inputs.shape[0],):
        raise DimensionMismatchError(f"response has shape {response.shape} but inputs have {inputs.shape[0]} rows")

    predictions = np.asarray(model.predict(inputs), dtype=float)
    if predictions.shape != (inputs.shape[0],):
        raise ModelError(
            f"model '{model.identifier}' returned {predictions.size} predictions for {inputs.shape[0]} rows"
        )
    not_finite = np.flatnonzero(~np.isfinite(predictions))
    if not_finite.size:
        row = int(not_finite[0])
        raise NonFiniteValueError(
            f"model '{model.identifier}' produced a non-finite prediction at row {row}", row_index=row
        )
    return loss(predictions, response)


def default_loss(task_kind) -> LossFunction:
    """Cross-entropy for binary classification, squared error otherwise."""
    if TaskKind(task_kind) is TaskKind.BINARY_CLASSIFICATION:
        return LossFunction.cross_entropy()
    return LossFunction.squared_error()
