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

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from ..exceptions import ConfigurationError
from ..imputer.pair import ImputerVariant


class Method(str, Enum):
    WILCOXON = "wilcoxon"
    SIGN_TEST = "sign_test"
    KNOCKOFF_THRESHOLD = "knockoff_threshold"
    BH_ON_WILCOXON = "bh_on_wilcoxon"

    @property
    def yields_p_values(self) -> bool:
        return self is not Method.KNOCKOFF_THRESHOLD

    @classmethod
    def parse(cls, name: str) -> "Method":
        aliases = {"knockoff": cls.KNOCKOFF_THRESHOLD, "bh": cls.BH_ON_WILCOXON, "sign": cls.SIGN_TEST}
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError as exc:
            choices = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"unknown method '{name}' (choose from {choices})") from exc


@dataclass(frozen=True)
class FeatureDecision:
    feature_index: int
    name: str
    statistic: float
    p_value: Optional[float]
    selected: bool
    method: Method


@dataclass(frozen=True)
class SelectionReport:
    """Per-feature decisions of one semi-knockoff run.

    threshold is set only for the knockoff method; it is math.inf when no
    candidate satisfies the target level.
    """

    decisions: Tuple[FeatureDecision, ...]
    threshold: Optional[float]
    target_level: float
    method: Method
    seed: int
    permutations: int = 1
    variant: ImputerVariant = ImputerVariant.ESTIMATED
    n_features: int = 0

    @property
    def selected_indices(self) -> List[int]:
        return [d.feature_index for d in self.decisions if d.selected]

    @property
    def statistics(self) -> List[float]:
        return [d.statistic for d in self.decisions]
