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

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ..core.losses import LossFunction, evaluate_loss
from ..core.model import PredictiveModel
from ..exceptions import ConfigurationError, DimensionMismatchError
from ..sampler.draws import SemiKnockoffDraw


@dataclass(frozen=True, eq=False)
class PairedLossSample:
    """Per-sample losses under the nu-population and the rho-population."""

    losses_one: np.ndarray
    losses_two: np.ndarray
    differences: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        one = np.asarray(self.losses_one, dtype=float)
        two = np.asarray(self.losses_two, dtype=float)
        if one.ndim != 1 or one.shape != two.shape:
            raise DimensionMismatchError(f"paired losses must be equal-length vectors, got {one.shape} and {two.shape}")
        object.__setattr__(self, "losses_one", one)
        object.__setattr__(self, "losses_two", two)
        object.__setattr__(self, "differences", one - two)

    @property
    def statistic(self) -> float:
        """Mean loss difference, the feature's semi-knockoff statistic."""
        return float(np.mean(self.differences))


def paired_losses(
    model: PredictiveModel,
    loss: LossFunction,
    draw_or_batch: Union[SemiKnockoffDraw, Sequence[SemiKnockoffDraw]],
    response,
) -> PairedLossSample:
    """Evaluate *model* on both populations of one draw or a batch of draws.

    For a batch the per-sample losses are averaged across draws.
    """
    draws = [draw_or_batch] if isinstance(draw_or_batch, SemiKnockoffDraw) else list(draw_or_batch)
    if not draws:
        raise ConfigurationError("paired_losses needs at least one draw")
    response = np.asarray(response, dtype=float)

    total_one = np.zeros(response.shape[0])
    total_two = np.zeros(response.shape[0])
    for draw in draws:
        total_one += evaluate_loss(model, loss, draw.inputs_one, response)
        total_two += evaluate_loss(model, loss, draw.inputs_two, response)
    return PairedLossSample(total_one / len(draws), total_two / len(draws))
