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

"""Tidy CSV views of reports, written with pandas."""

import logging
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence, Union

import pandas as pd

from ..core.dataset import TabularDataset
from ..inference.report import SelectionReport
from ..simbench.experiments import ExperimentReport

logger = logging.getLogger(__name__)

SELECTION_COLUMNS = ("index", "name", "statistic", "p_value", "selected")
EXPERIMENT_COLUMNS = ("replicate", "metric", "value")
_EXPERIMENT_METRICS = ("fdp", "power", "type_i", "auc")


def selection_frame(report: SelectionReport) -> pd.DataFrame:
    """One row per tested feature."""
    return pd.DataFrame(
        [(d.feature_index, d.name, d.statistic, d.p_value, d.selected) for d in report.decisions],
        columns=list(SELECTION_COLUMNS),
    )


def experiment_frame(report: ExperimentReport) -> pd.DataFrame:
    """One row per replicate per metric."""
    rows = []
    for record in report.records:
        for metric in _EXPERIMENT_METRICS:
            rows.append((record.replicate, metric, getattr(record, metric)))
        if record.decoy_selected is not None:
            rows.append((record.replicate, "decoy_selected", float(record.decoy_selected)))
    return pd.DataFrame(rows, columns=list(EXPERIMENT_COLUMNS))


def dataset_frame(data: TabularDataset, target_column: str) -> pd.DataFrame:
    """Input columns in order, then the response under *target_column*."""
    columns = {data.feature_name(j): data.inputs[:, j] for j in range(data.n_features)}
    columns[target_column] = data.response
    return pd.DataFrame(columns)


def rows_frame(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame([dict(r) for r in rows], columns=list(columns))


def save_csv(output_path: Union[str, Path], frame: pd.DataFrame) -> None:
    path = Path(output_path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    logger.info(f"Saved CSV: {path}")
