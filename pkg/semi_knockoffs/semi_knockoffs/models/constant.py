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

from dataclasses import dataclass

import numpy as np

from ..core.model import PredictiveModel
from ..exceptions import DimensionMismatchError, NonFiniteValueError


@dataclass(frozen=True)
class ConstantModel(PredictiveModel):
    """Predicts *value* for every row, whatever the inputs."""

    value: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.value):
            raise NonFiniteValueError(f"constant model value must be finite, got {self.value}")

    @property
    def identifier(self) -> str:
        return f"constant:{self.value:g}"

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=float)
        if inputs.ndim != 2:
            raise DimensionMismatchError(f"inputs must be a matrix, got shape {inputs.shape}")
        return np.full(inputs.shape[0], float(self.value))
