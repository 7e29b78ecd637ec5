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

from .csv_io import dataset_frame, experiment_frame, rows_frame, save_csv, selection_frame
from .json_io import build_experiment_report, build_probe, build_selection_report, load_json, save_json
from .schema import (
    ExperimentReportPayload,
    FeatureRecord,
    PayloadKind,
    ProbePayload,
    ReplicatePayload,
    SelectionReportPayload,
)

__all__ = [
    "ExperimentReportPayload",
    "FeatureRecord",
    "PayloadKind",
    "ProbePayload",
    "ReplicatePayload",
    "SelectionReportPayload",
    "build_experiment_report",
    "build_probe",
    "build_selection_report",
    "dataset_frame",
    "experiment_frame",
    "load_json",
    "rows_frame",
    "save_csv",
    "save_json",
    "selection_frame",
]
