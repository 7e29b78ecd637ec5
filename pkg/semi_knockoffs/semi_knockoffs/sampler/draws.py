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

"""Semi-knockoff populations built by permuting imputer residuals.

For feature j, the first population replaces column j by
nu(X^{-j}) + eps_nu[pi_1] and the second by rho(X^{-j}, y) + eps_rho[pi_2].
Every other column is left untouched.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..core.dataset import TabularDataset
from ..core.rng import RngStream, derive_stream
from ..exceptions import ConfigurationError, DimensionMismatchError
from ..imputer.oracle import OracleImputer
from ..imputer.pair import ImputerPair, ImputerVariant, build_pair

logger = logging.getLogger(__name__)

# child streams of a draw's RngStream
_STREAM_ONE = 0
_STREAM_TWO = 1


@dataclass(frozen=True, eq=False)
class SemiKnockoffDraw:
    feature_index: int
    variant: ImputerVariant
    inputs_one: np.ndarray
    inputs_two: np.ndarray
    permutation_one: np.ndarray
    permutation_two: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.inputs_one.shape[0]


def _check_permutation(permutation, n: int, what: str) -> np.ndarray:
    permutation = np.asarray(permutation, dtype=np.int64)
    if permutation.shape != (n,) or not np.array_equal(np.sort(permutation), np.arange(n)):
        raise ConfigurationError(f"{what} is not a permutation of 0..{n - 1}")
    return permutation


def _replace_column(inputs: np.ndarray, j: int, column: np.ndarray) -> np.ndarray:
    out = inputs.copy()
    out[:, j] = column
    out.setflags(write=False)
    return out


def draw_with_permutations(
    data: TabularDataset,
    pair: ImputerPair,
    permutation_one,
    permutation_two,
) -> SemiKnockoffDraw:
    """Build the two populations for explicitly given permutations."""
    n = data.n_samples
    if pair.n_samples != n:
        raise DimensionMismatchError(f"imputer pair was fitted on {pair.n_samples} rows, data has {n}")
    data.check_feature_index(pair.feature_index)
    perm_one = _check_permutation(permutation_one, n, "permutation_one")
    perm_two = _check_permutation(permutation_two, n, "permutation_two")

    j = pair.feature_index
    column_one = pair.predictions_nu + pair.residuals_nu[perm_one]
    column_two = pair.predictions_rho + pair.residuals_rho[perm_two]
    return SemiKnockoffDraw(
        feature_index=j,
        variant=pair.variant,
        inputs_one=_replace_column(data.inputs, j, column_one),
        inputs_two=_replace_column(data.inputs, j, column_two),
        permutation_one=perm_one,
        permutation_two=perm_two,
    )


def draw_semi_knockoff(data: TabularDataset, pair: ImputerPair, rng: RngStream) -> SemiKnockoffDraw:
    """One draw with pi_1 and pi_2 sampled independently and uniformly.

    pi_1 comes from child stream 0 of *rng*, pi_2 from child stream 1.
    """
    n = data.n_samples
    perm_one = derive_stream(rng, _STREAM_ONE).generator().permutation(n)
    perm_two = derive_stream(rng, _STREAM_TWO).generator().permutation(n)
    return draw_with_permutations(data, pair, perm_one, perm_two)


def oracle_pair(data: TabularDataset, oracle_nu: OracleImputer, oracle_rho: OracleImputer) -> ImputerPair:
    """ImputerPair holding the theoretical residuals of the oracle conditional means."""
    if oracle_nu.target_index != oracle_rho.target_index:
        raise DimensionMismatchError(
            f"oracle imputers target different features ({oracle_nu.target_index} vs {oracle_rho.target_index})"
        )
    return build_pair(data, oracle_nu.target_index, oracle_nu, oracle_rho, ImputerVariant.ORACLE)


def draw_oracle_semi_knockoff(
    data: TabularDataset,
    oracle_nu: OracleImputer,
    oracle_rho: OracleImputer,
    rng: RngStream,
) -> SemiKnockoffDraw:
    return draw_semi_knockoff(data, oracle_pair(data, oracle_nu, oracle_rho), rng)


def draw_batch(
    data: TabularDataset,
    pair: ImputerPair,
    rng: RngStream,
    count: int,
) -> List[SemiKnockoffDraw]:
    """*count* draws; draw i uses the stream derived from *rng* at i."""
    if int(count) < 1:
        raise ConfigurationError(f"permutation count must be at least 1, got {count}")
    draws = [draw_semi_knockoff(data, pair, derive_stream(rng, i)) for i in range(int(count))]
    logger.debug(f"feature {pair.feature_index}: drew {count} semi-knockoff pair(s)")
    return draws
