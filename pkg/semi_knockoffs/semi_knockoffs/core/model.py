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

"""Predictive-model abstraction consumed by every statistic."""

from abc import ABC, abstractmethod

import numpy as np


class PredictiveModel(ABC):
    """A pre-trained model m: R^p -> R.

    Regression models return scores; binary classifiers return the class-1
    probability. predict must be deterministic and return one finite value
    per row.
    """

    #: False when predict must not be called from several workers at once.
    concurrent_safe: bool = True

    @property
    @abstractmethod
    def identifier(self) -> str:
        """Short human-readable description used in reports."""

    @abstractmethod
    def predict(self, inputs: np.ndarray) -> np.ndarray:
        """Predict one value per row of a (k, p) batch."""
