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

from typing import Any, Dict, List, Literal, Optional, TypedDict

PayloadKind = Literal[
    "selection_report",
    "experiment_report",
    "stability_curve",
    "wasserstein_rate",
    "double_robustness",
    "exchangeability_snapshot",
    "null_injection",
]


class FeatureRecord(TypedDict):
    index: int
    name: str
    statistic: float
    p_value: Optional[float]
    selected: bool


class SelectionReportPayload(TypedDict, total=False):
    format_version: str
    kind: PayloadKind
    method: str
    level: float
    seed: int
    permutations: int
    imputer: str  # "estimated" | "oracle"
    threshold: Optional[float]
    no_threshold: bool
    n_features: int
    selected: List[int]
    features: List[FeatureRecord]
    config: Dict[str, Any]


class ReplicatePayload(TypedDict, total=False):
    replicate: int
    fdp: float
    power: float
    type_i: float
    auc: Optional[float]
    selected: List[int]
    important: List[int]
    decoy_selected: Optional[bool]


class SettingPayload(TypedDict, total=False):
    kind: str
    n: int
    p: int
    correlation_rho: float
    noise_sd: float
    sparsity: float
    noise_variance: float


class ExperimentReportPayload(TypedDict, total=False):
    format_version: str
    kind: PayloadKind
    seed: int
    setting: SettingPayload
    method: Dict[str, Any]
    replicate_count: int
    aggregates: Dict[str, Optional[float]]
    replicates: List[ReplicatePayload]
    config: Dict[str, Any]


class ProbePayload(TypedDict, total=False):
    """Stability, Wasserstein, double-robustness, snapshot and injection outputs."""

    format_version: str
    kind: PayloadKind
    seed: int
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any]
    config: Dict[str, Any]
