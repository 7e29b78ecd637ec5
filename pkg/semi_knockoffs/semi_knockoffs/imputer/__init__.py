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

from .oracle import GaussianOracle, OracleImputer, oracle_conditional_mean, oracle_imputers
from .pair import ConditionalMean, ImputerPair, ImputerVariant, build_pair, fit_imputer_pair, rho_regressors
from .ridge import DEFAULT_LAMBDA, GCV_GRID, RegressorSpec, RidgeImputer, fit_ridge, select_lambda_gcv
from .stability import stability_probe

__all__ = [
    "DEFAULT_LAMBDA",
    "GCV_GRID",
    "ConditionalMean",
    "GaussianOracle",
    "ImputerPair",
    "ImputerVariant",
    "OracleImputer",
    "RegressorSpec",
    "RidgeImputer",
    "build_pair",
    "fit_imputer_pair",
    "fit_ridge",
    "oracle_conditional_mean",
    "oracle_imputers",
    "rho_regressors",
    "select_lambda_gcv",
    "stability_probe",
]
