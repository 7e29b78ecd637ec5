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

import logging

import numpy as np
import pytest

from semi_knockoffs.core.dataset import TabularDataset
from semi_knockoffs.core.rng import RngStream
from semi_knockoffs.exceptions import ConfigurationError, CovarianceError, DimensionMismatchError, SingularSystemError
from semi_knockoffs.imputer import (
    GCV_GRID,
    GaussianOracle,
    ImputerVariant,
    RegressorSpec,
    fit_imputer_pair,
    fit_ridge,
    oracle_conditional_mean,
    oracle_imputers,
    select_lambda_gcv,
    stability_probe,
)
from semi_knockoffs.simbench.settings import ar1_covariance


def _closed_form(targets, regressors, lam):
    chi = regressors - regressors.mean(axis=0)
    z = targets - targets.mean()
    n, k = chi.shape
    return np.linalg.solve(chi.T @ chi / n + lam * np.eye(k), chi.T @ z / n)


# ---- ridge -------------------------------------------------------------------


def test_ridge_single_regressor_closed_form():
    imputer = fit_ridge(np.array([1.0, -1.0]), np.array([[1.0], [-1.0]]), 1.0)
    np.testing.assert_allclose(imputer.coefficients, [0.5])
    assert imputer.intercept == pytest.approx(0.0)
    assert imputer.regressor_spec is RegressorSpec.WITHOUT_RESPONSE


def test_ridge_interpolates_exact_linear_targets():
    rng = np.random.default_rng(1)
    regressors = rng.standard_normal((50, 3))
    targets = regressors @ np.array([1.5, -2.0, 0.25]) + 4.0
    imputer = fit_ridge(targets, regressors, 0.0)
    np.testing.assert_allclose(imputer.coefficients, [1.5, -2.0, 0.25], atol=1e-8)
    np.testing.assert_allclose(imputer.predict(regressors), targets, atol=1e-8)


def test_ridge_infinite_penalty_limit():
    rng = np.random.default_rng(2)
    regressors = rng.standard_normal((40, 2))
    targets = regressors[:, 0] + rng.standard_normal(40)
    imputer = fit_ridge(targets, regressors, 1e9)
    assert np.linalg.norm(imputer.coefficients) < 1e-8
    assert imputer.intercept == pytest.approx(targets.mean())


def test_ridge_matches_normal_equations():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(5, 201))
        k = int(rng.integers(1, 21))
        lam = float(10 ** rng.uniform(-4, 1))
        regressors = rng.standard_normal((n, k))
        targets = regressors @ rng.standard_normal(k) + rng.standard_normal(n)
        expected = _closed_form(targets, regressors, lam)
        got = fit_ridge(targets, regressors, lam).coefficients
        assert np.linalg.norm(got - expected) <= 1e-8 * max(1.0, np.linalg.norm(expected))

        chi = regressors - regressors.mean(axis=0)
        rhs = chi.T @ (targets - targets.mean()) / n
        residual = (chi.T @ chi / n + lam * np.eye(k)) @ got - rhs
        assert np.max(np.abs(residual)) <= 1e-9 * max(1.0, np.max(np.abs(rhs)))


def test_ridge_collinear_at_zero_lambda(caplog):
    rng = np.random.default_rng(4)
    column = rng.standard_normal(30)
    regressors = np.column_stack([column, column])
    targets = column + 0.1 * rng.standard_normal(30)
    with caplog.at_level(logging.WARNING):
        imputer = fit_ridge(targets, regressors, 0.0)
    assert "pseudo-inverse" in caplog.text
    assert np.all(np.isfinite(imputer.coefficients))
    with pytest.raises(SingularSystemError):
        fit_ridge(targets, regressors, 0.0, strict=True)


def test_ridge_rejects_bad_inputs():
    with pytest.raises(ConfigurationError):
        fit_ridge(np.zeros(3), np.zeros((3, 1)), -1.0)
    with pytest.raises(DimensionMismatchError):
        fit_ridge(np.zeros(3), np.zeros((4, 1)), 1.0)
    imputer = fit_ridge(np.arange(3.0), np.ones((3, 1)) * np.arange(3.0)[:, None], 0.1)
    with pytest.raises(DimensionMismatchError):
        imputer.predict(np.zeros((2, 2)))


def test_ridge_shrinks_as_lambda_grows():
    rng = np.random.default_rng(5)
    regressors = rng.standard_normal((100, 4))
    targets = rng.standard_normal(100)
    small = fit_ridge(targets, regressors, 0.01).coefficients
    large = fit_ridge(targets, regressors, 10.0).coefficients
    assert np.linalg.norm(large) < np.linalg.norm(small)


def test_gcv_returns_grid_value():
    rng = np.random.default_rng(6)
    regressors = rng.standard_normal((80, 5))
    targets = regressors @ np.array([1.0, 0.5, 0.0, 0.0, -1.0]) + rng.standard_normal(80)
    assert select_lambda_gcv(targets, regressors) in GCV_GRID
    assert select_lambda_gcv(targets, regressors, grid=[0.5]) == 0.5
    assert select_lambda_gcv(targets, np.zeros((80, 0))) == min(GCV_GRID)
    with pytest.raises(ConfigurationError):
        select_lambda_gcv(targets, regressors, grid=[0.0, 1.0])


# ---- imputer pairs -----------------------------------------------------------


def test_pair_of_constant_feature_has_zero_residuals():
    rng = np.random.default_rng(7)
    inputs = rng.standard_normal((30, 3))
    inputs[:, 1] = 2.5
    data = TabularDataset(inputs, rng.standard_normal(30))
    pair = fit_imputer_pair(data, 1, 0.1)
    np.testing.assert_array_equal(pair.residuals_nu, np.zeros(30))
    np.testing.assert_array_equal(pair.residuals_rho, np.zeros(30))


def test_pair_with_single_feature():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(25)
    data = TabularDataset(x[:, None], x + rng.standard_normal(25))
    pair = fit_imputer_pair(data, 0, 0.1)
    np.testing.assert_allclose(pair.predictions_nu, np.full(25, x.mean()))
    np.testing.assert_allclose(pair.residuals_nu, x - x.mean())
    assert pair.rho.regressor_spec is RegressorSpec.WITH_RESPONSE
    assert pair.variant is ImputerVariant.ESTIMATED


def test_pair_residuals_reconstruct_feature(gaussian_data):
    pair = fit_imputer_pair(gaussian_data, 2, 0.1)
    column = gaussian_data.inputs[:, 2]
    np.testing.assert_allclose(pair.predictions_nu + pair.residuals_nu, column)
    np.testing.assert_allclose(pair.predictions_rho + pair.residuals_rho, column)
    assert abs(pair.residuals_nu.mean()) < 1e-10
    assert pair.n_samples == 200


# ---- Gaussian oracle ---------------------------------------------------------


def test_oracle_independent_coordinates():
    oracle = GaussianOracle(np.zeros(3), np.eye(3))
    prediction, sd = oracle_conditional_mean(oracle, [4.0, -2.0], 1)
    assert prediction == pytest.approx(0.0)
    assert sd == pytest.approx(1.0)


def test_oracle_two_dimensional():
    oracle = GaussianOracle(np.zeros(2), np.array([[1.0, 0.6], [0.6, 1.0]]))
    prediction, sd = oracle_conditional_mean(oracle, [1.0], 0)
    assert prediction == pytest.approx(0.6)
    assert sd == pytest.approx(0.8)


def test_oracle_ar1_middle_coordinate():
    covariance = ar1_covariance(3, 0.6)
    oracle = GaussianOracle(np.zeros(3), covariance)
    weights = np.linalg.solve(covariance[np.ix_([0, 2], [0, 2])], covariance[1, [0, 2]])
    prediction, sd = oracle_conditional_mean(oracle, [1.0, 1.0], 1)
    assert prediction == pytest.approx(weights.sum())
    assert prediction == pytest.approx(1.2 / 1.36)
    assert sd == pytest.approx(np.sqrt(1.0 - weights @ covariance[1, [0, 2]]))


def test_oracle_validation():
    with pytest.raises(CovarianceError):
        GaussianOracle(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(CovarianceError):
        GaussianOracle(np.zeros(2), np.array([[1.0, 0.2], [0.1, 1.0]]))
    with pytest.raises(DimensionMismatchError):
        GaussianOracle(np.zeros(3), np.eye(2))
    with pytest.raises(DimensionMismatchError):
        oracle_conditional_mean(GaussianOracle(np.zeros(3), np.eye(3)), [1.0], 0)


def test_oracle_imputers_split_joint_law():
    joint = GaussianOracle(np.zeros(3), np.array([[1.0, 0.3, 0.5], [0.3, 1.0, 0.2], [0.5, 0.2, 1.5]]))
    nu, rho = oracle_imputers(joint, 0)
    assert nu.oracle.dimension == 2
    assert rho.oracle.dimension == 3
    assert nu.predict(np.array([[1.0]]))[0] == pytest.approx(0.3)
    assert rho.conditional_sd < nu.conditional_sd


# ---- stability probe ---------------------------------------------------------


def test_stability_probe_of_sole_predictor_is_large():
    rng = np.random.default_rng(9)
    inputs = rng.standard_normal((500, 4))
    data = TabularDataset(inputs, inputs[:, 2].copy())
    assert stability_probe(data, 2, 0.01) > 0.5


def test_stability_probe_with_duplicate_regressor_is_finite():
    rng = np.random.default_rng(10)
    x = rng.standard_normal(100)
    inputs = np.column_stack([x, x, rng.standard_normal(100)])
    data = TabularDataset(inputs, x + rng.standard_normal(100))
    assert np.isfinite(stability_probe(data, 0, 0.1))


def test_stability_probe_requires_positive_lambda(gaussian_data):
    with pytest.raises(ConfigurationError):
        stability_probe(gaussian_data, 0, 0.0)


@pytest.mark.slow
def test_null_stability_probe_shrinks_with_n():
    def median_probe(n):
        values = []
        for seed in range(20):
            generator = RngStream(seed, (n,)).generator()
            inputs = generator.standard_normal((n, 5))
            response = inputs[:, 0] + generator.standard_normal(n)
            values.append(stability_probe(TabularDataset(inputs, response), 3, 1e-3))
        return np.median(values)

    assert median_probe(3200) < median_probe(200)
