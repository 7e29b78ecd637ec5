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
import pytest
import scipy.stats

from semi_knockoffs.core.dataset import TabularDataset
from semi_knockoffs.core.rng import RngStream, derive_stream
from semi_knockoffs.exceptions import ConfigurationError, DimensionMismatchError
from semi_knockoffs.imputer import GaussianOracle, ImputerVariant, fit_imputer_pair, oracle_imputers
from semi_knockoffs.sampler import (
    draw_batch,
    draw_oracle_semi_knockoff,
    draw_semi_knockoff,
    draw_with_permutations,
    oracle_pair,
)
from semi_knockoffs.simbench import SyntheticSetting, generate, joint_gaussian_oracle


@pytest.fixture
def pair(gaussian_data):
    return fit_imputer_pair(gaussian_data, 1, 0.1)


def test_identity_permutations_reproduce_feature(gaussian_data, pair):
    identity = np.arange(gaussian_data.n_samples)
    draw = draw_with_permutations(gaussian_data, pair, identity, identity)
    np.testing.assert_allclose(draw.inputs_one, gaussian_data.inputs, atol=1e-12)
    np.testing.assert_allclose(draw.inputs_two, gaussian_data.inputs, atol=1e-12)


def test_two_row_swap():
    data = TabularDataset(np.array([[1.0], [0.0]]), np.array([0.0, 1.0]))
    pair = fit_imputer_pair(data, 0, 0.1)
    draw = draw_with_permutations(data, pair, [1, 0], [0, 1])
    np.testing.assert_allclose(draw.inputs_one[:, 0], [0.0, 1.0])


def test_draw_preserves_column_mean_and_other_columns(gaussian_data, pair):
    draw = draw_semi_knockoff(gaussian_data, pair, RngStream(3))
    for population in (draw.inputs_one, draw.inputs_two):
        assert population[:, 1].mean() == pytest.approx(gaussian_data.inputs[:, 1].mean(), abs=1e-10)
        np.testing.assert_array_equal(np.delete(population, 1, axis=1), gaussian_data.other_columns(1))
        assert not population.flags.writeable
    assert draw.variant is ImputerVariant.ESTIMATED
    assert draw.n_samples == gaussian_data.n_samples


def test_draw_uses_independent_permutations(gaussian_data, pair):
    draw = draw_semi_knockoff(gaussian_data, pair, RngStream(4))
    assert sorted(draw.permutation_one) == list(range(gaussian_data.n_samples))
    assert not np.array_equal(draw.permutation_one, draw.permutation_two)


def test_draws_are_deterministic(gaussian_data, pair):
    first = draw_semi_knockoff(gaussian_data, pair, RngStream(5, (1,)))
    second = draw_semi_knockoff(gaussian_data, pair, RngStream(5, (1,)))
    np.testing.assert_array_equal(first.inputs_one, second.inputs_one)
    np.testing.assert_array_equal(first.inputs_two, second.inputs_two)
    other = draw_semi_knockoff(gaussian_data, pair, RngStream(6, (1,)))
    assert not np.array_equal(first.permutation_one, other.permutation_one)


def test_batch_of_one_matches_single_draw(gaussian_data, pair):
    root = RngStream(8)
    (batched,) = draw_batch(gaussian_data, pair, root, 1)
    single = draw_semi_knockoff(gaussian_data, pair, derive_stream(root, 0))
    np.testing.assert_array_equal(batched.inputs_one, single.inputs_one)
    np.testing.assert_array_equal(batched.inputs_two, single.inputs_two)


def test_batch_draws_differ(gaussian_data, pair):
    draws = draw_batch(gaussian_data, pair, RngStream(9), 3)
    assert len(draws) == 3
    assert not np.array_equal(draws[0].permutation_one, draws[1].permutation_one)


def test_batch_rejects_zero_count(gaussian_data, pair):
    with pytest.raises(ConfigurationError):
        draw_batch(gaussian_data, pair, RngStream(1), 0)


@pytest.mark.parametrize("permutation", [[0, 0, 1], [0, 1], [0, 1, 3]])
def test_invalid_permutation(permutation):
    data = TabularDataset(np.arange(6.0).reshape(3, 2), np.array([0.0, 1.0, 3.0]))
    pair = fit_imputer_pair(data, 0, 0.1)
    with pytest.raises(ConfigurationError):
        draw_with_permutations(data, pair, permutation, [0, 1, 2])


def test_pair_fitted_on_other_rows(gaussian_data):
    small = TabularDataset(gaussian_data.inputs[:50], gaussian_data.response[:50])
    pair = fit_imputer_pair(small, 0, 0.1)
    identity = np.arange(gaussian_data.n_samples)
    with pytest.raises(DimensionMismatchError):
        draw_with_permutations(gaussian_data, pair, identity, identity)


def test_oracle_draw(gaussian_data):
    joint = GaussianOracle(np.zeros(5), np.eye(5) + 0.1)
    nu, rho = oracle_imputers(joint, 2)
    draw = draw_oracle_semi_knockoff(gaussian_data, nu, rho, RngStream(10))
    assert draw.variant is ImputerVariant.ORACLE
    assert draw.feature_index == 2
    np.testing.assert_array_equal(np.delete(draw.inputs_one, 2, axis=1), gaussian_data.other_columns(2))

    other_nu, _ = oracle_imputers(joint, 3)
    with pytest.raises(DimensionMismatchError):
        oracle_pair(gaussian_data, other_nu, rho)


def test_draw_permutes_the_residual_pool(gaussian_data, pair):
    draw = draw_semi_knockoff(gaussian_data, pair, RngStream(12))
    residuals_one = draw.inputs_one[:, 1] - pair.predictions_nu
    residuals_two = draw.inputs_two[:, 1] - pair.predictions_rho
    np.testing.assert_allclose(np.sort(residuals_one), np.sort(pair.residuals_nu), rtol=0.0, atol=1e-10)
    np.testing.assert_allclose(np.sort(residuals_two), np.sort(pair.residuals_rho), rtol=0.0, atol=1e-10)


@pytest.mark.slow
def test_oracle_null_draws_share_their_marginal():
    setting = SyntheticSetting("adjacent", n=5000, p=10)
    accepted = 0
    for run in range(100):
        stream = RngStream(500 + run)
        data, truth = generate(setting, derive_stream(stream, 0))
        j = int(truth.null_indices[-1])
        nu, rho = oracle_imputers(joint_gaussian_oracle(truth), j)
        draw = draw_oracle_semi_knockoff(data, nu, rho, derive_stream(stream, 1))
        accepted += scipy.stats.ks_2samp(draw.inputs_one[:, j], draw.inputs_two[:, j]).pvalue >= 0.01
    assert accepted >= 95
