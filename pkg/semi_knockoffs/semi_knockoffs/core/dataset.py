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

"""Tabular dataset container and CSV ingestion."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..exceptions import (
    ConstantTargetError,
    DatasetError,
    DimensionMismatchError,
    MissingColumnError,
    NonNumericCellError,
    TooFewRowsError,
)

logger = logging.getLogger(__name__)


class TaskKind(str, Enum):
    REGRESSION = "regression"
    BINARY_CLASSIFICATION = "binary_classification"


class DatasetFormat(str, Enum):
    CSV_WITH_HEADER = "csv_with_header"


def _frozen_array(values, ndim: int, what: str) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    if array.ndim != ndim:
        raise DimensionMismatchError(f"{what} must be {ndim}-dimensional, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TabularDataset:
    """An n x p input matrix with its length-n response.

    Arrays are copied and made read-only on construction, so a dataset can be
    shared between workers.
    """

    inputs: np.ndarray
    response: np.ndarray
    column_names: Optional[Tuple[str, ...]] = None
    task_kind: TaskKind = TaskKind.REGRESSION

    def __post_init__(self) -> None:
        inputs = _frozen_array(self.inputs, 2, "inputs")
        response = _frozen_array(self.response, 1, "response")
        n, p = inputs.shape
        if n < 2:
            raise TooFewRowsError(f"dataset needs at least 2 rows, got {n}")
        if p < 1:
            raise DatasetError("dataset needs at least one feature column")
        if response.shape[0] != n:
            raise DimensionMismatchError(f"response has {response.shape[0]} entries but inputs have {n} rows")
        if not np.all(np.isfinite(inputs)):
            row, col = np.argwhere(~np.isfinite(inputs))[0]
            raise DatasetError(f"non-finite input at row {row}, column {col}")
        if not np.all(np.isfinite(response)):
            raise DatasetError(f"non-finite response at row {int(np.flatnonzero(~np.isfinite(response))[0])}")

        task_kind = TaskKind(self.task_kind)
        if task_kind is TaskKind.BINARY_CLASSIFICATION and not np.all(np.isin(response, (0.0, 1.0))):
            raise DatasetError("binary_classification response must take values in {0, 1}")

        names = self.column_names
        if names is not None:
            names = tuple(str(name) for name in names)
            if len(names) != p:
                raise DimensionMismatchError(f"{len(names)} column names given for {p} features")

        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "response", response)
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "task_kind", task_kind)

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[1]

    def feature_name(self, index: int) -> str:
        if self.column_names is not None:
            return self.column_names[index]
        return f"x{index}"

    def other_columns(self, index: int) -> np.ndarray:
        """Return X^{-j}: every input column except *index*."""
        self.check_feature_index(index)
        return np.delete(self.inputs, index, axis=1)

    def check_feature_index(self, index: int) -> None:
        if not 0 <= index < self.n_features:
            raise DimensionMismatchError(f"feature index {index} out of range [0, {self.n_features})")

    def with_inputs(self, inputs: np.ndarray, column_names: Optional[Sequence[str]] = None) -> "TabularDataset":
        """Copy of this dataset with a different input matrix.

        Column names are kept when the width is unchanged and no new names are given.
        """
        if column_names is None and np.shape(inputs)[1] == self.n_features:
            column_names = self.column_names
        return replace(self, inputs=inputs, column_names=tuple(column_names) if column_names is not None else None)


def _infer_task(response: np.ndarray) -> Tuple[np.ndarray, TaskKind]:
    distinct = np.unique(response)
    if distinct.size == 2:
        # Ascending order: the smaller value becomes class 0.
        return (response == distinct[1]).astype(float), TaskKind.BINARY_CLASSIFICATION
    return response, TaskKind.REGRESSION


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    raw = frame[column]
    parsed = pd.to_numeric(raw.str.strip(), errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(parsed))
    if bad.size:
        row = int(bad[0])
        # +2: one for the header line, one for 1-based numbering
        raise NonNumericCellError(f"column '{column}', line {row + 2}: {raw.iloc[row]!r} is not a finite number")
    return parsed


def load_dataset(
    path: Union[str, Path],
    target_column: str,
    format: Union[str, DatasetFormat] = DatasetFormat.CSV_WITH_HEADER,
) -> TabularDataset:
    """Load a comma-separated file with a header row into a TabularDataset.

    The target column is removed from the inputs. A target with exactly two
    distinct values is treated as binary classification and remapped to
    {0, 1} by ascending value.
    """
    DatasetFormat(format)
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"data file not found: {path}")

    try:
        frame = pd.read_csv(path, sep=",", dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DatasetError(f"failed to parse {path}: {exc}") from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    if target_column not in frame.columns:
        raise MissingColumnError(
            f"target column '{target_column}' not found in {path} (columns: {', '.join(frame.columns)})"
        )
    if len(frame) < 2:
        raise TooFewRowsError(f"{path} has {len(frame)} data rows; at least 2 are required")

    feature_columns = [c for c in frame.columns if c != target_column]
    if not feature_columns:
        raise DatasetError(f"{path} has no feature columns besides '{target_column}'")

    response = _numeric_column(frame, target_column)
    if np.unique(response).size < 2:
        raise ConstantTargetError(f"target column '{target_column}' is constant")
    inputs = np.column_stack([_numeric_column(frame, c) for c in feature_columns])

    response, task_kind = _infer_task(response)
    logger.info(f"Loaded {path}: n={inputs.shape[0]}, p={inputs.shape[1]}, task={task_kind.value}")
    return TabularDataset(inputs=inputs, response=response, column_names=tuple(feature_columns), task_kind=task_kind)
