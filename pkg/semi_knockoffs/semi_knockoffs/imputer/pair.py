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

"""Per-feature (nu, rho) imputer pairs and their residual pools."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..core.dataset import TabularDataset
from ..exceptions import DimensionMismatchError
from .oracle import OracleImputer
from .ridge import RegressorSpec, RidgeImputer, fit_ridge

logger = logging.getLogger(__name__)

ConditionalMean = Union[RidgeImputer, OracleImputer]


class ImputerVariant(str, Enum):
    ESTIMATED = "estimated"
    ORACLE = "oracle"


@dataclass(frozen=True, eq=False)
class ImputerPair:
    """nu (X^j on X^{-j}) and rho (X^j on X^{-j}, y) for one feature.

    predictions_* hold the fitted conditional means per row and residuals_*
    the matching residual pools X^j - prediction.
    """

    feature_index: int
    nu: ConditionalMean
    rho: ConditionalMean
    predictions_nu: np.ndarray
    predictions_rho: np.ndarray
    residuals_nu: np.ndarray
    residuals_rho: np.ndarray
    variant: ImputerVariant = ImputerVariant.ESTIMATED

    @property
    def n_samples(self) -> int:
        return self.residuals_nu.shape[0]


def rho_regressors(data: TabularDataset, feature_index: int) -> np.ndarray:
    """(X^{-j}, y) with the raw response as last column."""
    return np.column_stack([data.other_columns(feature_index), data.response])


def build_pair(
    data: TabularDataset,
    feature_index: int,
    nu: ConditionalMean,
    rho: ConditionalMean,
    variant: ImputerVariant,
) -> ImputerPair:
    """Evaluate both imputers on *data* and collect the residual pools."""
    data.check_feature_index(feature_index)
    target = data.inputs[:, feature_index]
    predictions_nu = nu.predict(data.other_columns(feature_index))
    predictions_rho = rho.predict(rho_regressors(data, feature_index))
    if predictions_nu.shape != target.shape or predictions_rho.shape != target.shape:
        raise DimensionMismatchError("imputer predictions do not match the number of rows")
    return ImputerPair(
        feature_index=feature_index,
        nu=nu,
        rho=rho,
        predictions_nu=predictions_nu,
        predictions_rho=predictions_rho,
        residuals_nu=target - predictions_nu,
        residuals_rho=target - predictions_rho,
        variant=variant,
    )


def fit_imputer_pair(data: TabularDataset, feature_index: int, lam: float, *, strict: bool = False) -> ImputerPair:
    """Fit nu and rho for *feature_index* on the full sample (no split)."""
    data.check_feature_index(feature_index)
    target = data.inputs[:, feature_index]
    nu = fit_ridge(target, data.other_columns(feature_index), lam, strict=strict)
    rho = fit_ridge(
        target, rho_regressors(data, feature_index), lam, regressor_spec=RegressorSpec.WITH_RESPONSE, strict=strict
    )
    logger.debug(f"feature {feature_index}: fitted imputer pair (lambda={lam})")
    return build_pair(data, feature_index, nu, rho, ImputerVariant.ESTIMATED)
