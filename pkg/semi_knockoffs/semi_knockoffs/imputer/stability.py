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

import numpy as np

from ..core.dataset import TabularDataset
from ..exceptions import ConfigurationError
from .ridge import fit_ridge


def stability_probe(data: TabularDataset, dropped_index: int, lam: float) -> float:
    """||theta_tilde - theta_hat||_2 for ridge fits of response on inputs.

    theta_hat uses every regressor; theta_tilde is the fit without
    *dropped_index*, extended by 0 at that coordinate.
    """
    if not lam > 0:
        raise ConfigurationError(f"stability probe needs lambda > 0, got {lam}")
    data.check_feature_index(dropped_index)
    full = fit_ridge(data.response, data.inputs, lam)
    restricted = fit_ridge(data.response, data.other_columns(dropped_index), lam)
    extended = np.insert(restricted.coefficients, dropped_index, 0.0)
    return float(np.linalg.norm(extended - full.coefficients))
