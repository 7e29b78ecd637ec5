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

from .dataset import DatasetFormat, TabularDataset, TaskKind, load_dataset
from .losses import DEFAULT_CLAMP_EPS, LossFunction, LossKind, default_loss, evaluate_loss
from .model import PredictiveModel
from .rng import RngStream, derive_stream, stream_from_seed

__all__ = [
    "DEFAULT_CLAMP_EPS",
    "DatasetFormat",
    "LossFunction",
    "LossKind",
    "PredictiveModel",
    "RngStream",
    "TabularDataset",
    "TaskKind",
    "default_loss",
    "derive_stream",
    "evaluate_loss",
    "load_dataset",
    "stream_from_seed",
]
