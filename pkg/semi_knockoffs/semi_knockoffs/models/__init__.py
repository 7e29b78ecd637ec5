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

from .constant import ConstantModel
from .external import DEFAULT_REQUEST_TIMEOUT, ExternalModel, ExternalModelHandle
from .linear import Link, LinearModel, fit_linear
from .spec import DEFAULT_RIDGE_LAMBDA, ModelKind, ModelSpec
from .stumps import DEFAULT_LEARNING_RATE, DEFAULT_ROUNDS, BoostedStumpsModel, Stump, fit_boosted_stumps

__all__ = [
    "DEFAULT_LEARNING_RATE",
    "DEFAULT_REQUEST_TIMEOUT",
    "DEFAULT_RIDGE_LAMBDA",
    "DEFAULT_ROUNDS",
    "BoostedStumpsModel",
    "ConstantModel",
    "ExternalModel",
    "ExternalModelHandle",
    "LinearModel",
    "Link",
    "ModelKind",
    "ModelSpec",
    "Stump",
    "fit_boosted_stumps",
    "fit_linear",
]
