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

from .experiments import (
    DoubleRobustnessProbe,
    ExperimentReport,
    MethodConfig,
    RatePoint,
    ReplicateRecord,
    SnapshotRow,
    double_robustness_probe,
    exchangeability_snapshot,
    run_replicated,
    stability_curve,
    wasserstein_rate,
)
from .metrics import SelectionMetrics, auc_from_scores, metrics, wasserstein_1d
from .settings import (
    DR_CORRELATION,
    DR_NOISE_VARIANCE,
    GroundTruth,
    SettingKind,
    SyntheticSetting,
    ar1_covariance,
    design_oracle,
    generate,
    inject_correlated_null,
    joint_gaussian_oracle,
)

__all__ = [
    "DR_CORRELATION",
    "DR_NOISE_VARIANCE",
    "DoubleRobustnessProbe",
    "ExperimentReport",
    "GroundTruth",
    "MethodConfig",
    "RatePoint",
    "ReplicateRecord",
    "SelectionMetrics",
    "SettingKind",
    "SnapshotRow",
    "SyntheticSetting",
    "ar1_covariance",
    "auc_from_scores",
    "design_oracle",
    "double_robustness_probe",
    "exchangeability_snapshot",
    "generate",
    "inject_correlated_null",
    "joint_gaussian_oracle",
    "metrics",
    "run_replicated",
    "stability_curve",
    "wasserstein_1d",
    "wasserstein_rate",
]
