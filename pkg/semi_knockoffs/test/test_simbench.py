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

import math

import numpy as np
import pytest
import scipy.stats

from semi_knockoffs.core.dataset import TabularDataset, TaskKind
from semi_knockoffs.core.losses import LossFunction, default_loss
from semi_knockoffs.core.rng import RngStream, derive_stream
from semi_knockoffs.exceptions import ConfigurationError, DimensionMismatchError
from semi_knockoffs.imputer import ImputerVariant
from semi_knockoffs.inference import FeatureDecision, Method, SelectionReport, run_semi_knockoffs
from semi_knockoffs.models import LinearModel, ModelSpec, fit_linear
from semi_knockoffs.simbench import (
    GroundTruth,
    MethodConfig,
    SettingKind,
    SyntheticSetting,
    auc_from_scores,
    double_robustness_probe,
    exchangeability_snapshot,
    generate,
    inject_correlated_null,
    joint_gaussian_oracle,
    metrics,
    run_replicated,
    stability_curve,
    wasserstein_1d,
    wasserstein_rate,
)

STUMPS = ModelSpec.parse("boosted_stumps", rounds=20)
CONSTANT = ModelSpec.parse("constant:0")


def _report(selected):
    decisions = tuple(
        FeatureDecision(j, f"x{j}", 0.0, None, bool(flag), Method.KNOCKOFF_THRESHOLD) for j, flag in enumerate(selected)
    )
    return SelectionReport(decisions, math.inf, 0.2, Method.KNOCKOFF_THRESHOLD, 0, n_features=len(selected))


def _adjacent_correlations(inputs):
    return [np.corrcoef(inputs[:, j], inputs[:, j + 1])[0, 1] for j in range(inputs.shape[1] - 1)]


# ---- settings ----------------------------------------------------------------


def test_adjacent_support_layout():
    setting = SyntheticSetting(SettingKind.ADJACENT_SUPPORT, n=300, p=50)
    data, truth = generate(setting, RngStream(1))
    assert data.inputs.shape == (300, 50)
    assert truth.important_indices.tolist() == list(range(12))
    assert np.all((truth.generating_coefficients[:12] >= 1.0) & (truth.generating_coefficients[:12] <= 2.0))
    assert np.mean(_adjacent_correlations(data.inputs)) == pytest.approx(0.6, abs=0.05)
    assert truth.linear_gaussian


def test_masked_correlation_decoy():
    data, truth = generate(SyntheticSetting("masked_correlation", n=5000, p=50), RngStream(2))
    (relevant,) = truth.important_indices
    assert truth.decoy_index == relevant - 1
    correlation = np.corrcoef(data.inputs[:, relevant], data.inputs[:, truth.decoy_index])[0, 1]
    assert correlation == pytest.approx(1 / math.sqrt(1.25), abs=0.03)


def test_heavy_tails_marginals():
    data, truth = generate(SyntheticSetting("heavy_tails", n=20000, p=5), RngStream(3))
    assert np.median(scipy.stats.kurtosis(data.inputs, axis=0)) > 1.0
    assert not truth.linear_gaussian


def test_dr_setting_support():
    data, truth = generate(SyntheticSetting("dr_nonlinear", n=100, p=6), RngStream(4))
    assert truth.important_indices.tolist() == [1, 2, 3, 4]
    assert truth.metadata["noise_variance"] == 0.5
    with pytest.raises(ConfigurationError):
        SyntheticSetting("dr_nonlinear", n=100, p=4)


def test_stability_blocks_support():
    _, truth = generate(SyntheticSetting("stability_blocks", n=100, p=50), RngStream(5))
    important = truth.important_indices
    assert important.size == 15
    assert np.unique(important // 5).size == 3
    assert set(np.bincount(important // 5).tolist()) <= {0, 5}


def test_generation_is_deterministic():
    setting = SyntheticSetting("adjacent", n=50, p=8, stream=RngStream(6))
    first, _ = generate(setting)
    second, _ = generate(setting)
    np.testing.assert_array_equal(first.inputs, second.inputs)
    np.testing.assert_array_equal(first.response, second.response)
    with pytest.raises(ConfigurationError):
        generate(SyntheticSetting("adjacent", n=50, p=8))


@pytest.mark.parametrize(
    "kwargs",
    [{"n": 1}, {"p": 0}, {"correlation_rho": 1.0}, {"noise_sd": -1.0}, {"sparsity": 0.0}],
)
def test_setting_validation(kwargs):
    arguments = dict(kind="adjacent_support", n=50, p=5)
    arguments.update(kwargs)
    with pytest.raises(ConfigurationError):
        SyntheticSetting(**arguments)


def test_setting_aliases():
    assert SettingKind.parse("adjacent") is SettingKind.ADJACENT_SUPPORT
    assert SettingKind.parse("heavy_tails") is SettingKind.HEAVY_TAILS
    with pytest.raises(ConfigurationError):
        SettingKind.parse("spiral")


def test_joint_oracle_matches_generating_law():
    setting = SyntheticSetting("adjacent", n=50, p=6, correlation_rho=0.3, noise_sd=0.5)
    _, truth = generate(setting, RngStream(7))
    joint = joint_gaussian_oracle(truth)
    beta = truth.generating_coefficients
    assert joint.dimension == 7
    np.testing.assert_allclose(joint.covariance[:6, 6], truth.design_covariance @ beta)
    assert joint.covariance[6, 6] == pytest.approx(beta @ truth.design_covariance @ beta + 0.25)

    _, heavy = generate(SyntheticSetting("heavy", n=50, p=6), RngStream(7))
    with pytest.raises(ConfigurationError):
        joint_gaussian_oracle(heavy)


def test_inject_correlated_null():
    rng = np.random.default_rng(8)
    inputs = rng.standard_normal((5000, 4)) + rng.standard_normal((5000, 1))
    data = TabularDataset(inputs, inputs[:, 0] + rng.standard_normal(5000), column_names=("a", "b", "c", "d"))
    augmented, index = inject_correlated_null(data, 0.6, RngStream(9))
    assert index == 4
    assert augmented.column_names == ("a", "b", "c", "d", "injected_null")
    np.testing.assert_array_equal(augmented.inputs[:, :4], data.inputs)
    np.testing.assert_array_equal(augmented.response, data.response)
    standardized = (inputs - inputs.mean(axis=0)) / inputs.std(axis=0)
    correlation = np.corrcoef(augmented.inputs[:, 4], standardized.mean(axis=1))[0, 1]
    assert correlation == pytest.approx(0.6, abs=0.03)


def test_inject_uncorrelated_null():
    rng = np.random.default_rng(10)
    inputs = rng.standard_normal((5000, 3))
    data = TabularDataset(inputs, rng.standard_normal(5000))
    augmented, _ = inject_correlated_null(data, 0.0, RngStream(11))
    for j in range(3):
        assert abs(np.corrcoef(augmented.inputs[:, 3], inputs[:, j])[0, 1]) <= 0.05
    with pytest.raises(ConfigurationError):
        inject_correlated_null(data, 1.0, RngStream(11))


def test_injected_name_avoids_collisions():
    rng = np.random.default_rng(12)
    data = TabularDataset(rng.standard_normal((20, 2)), rng.standard_normal(20), column_names=("injected_null", "b"))
    augmented, _ = inject_correlated_null(data, 0.3, RngStream(13))
    assert augmented.column_names[-1] == "_injected_null"


# ---- metrics -----------------------------------------------------------------


def test_metrics_examples():
    truth = GroundTruth(important=[True, False])
    assert metrics(_report([True, False]), truth) == (0.0, 1.0, 0.0)
    assert metrics(_report([False, False]), truth) == (0.0, 0.0, 0.0)
    assert metrics(_report([True, True]), truth) == (0.5, 1.0, 1.0)
    with pytest.raises(DimensionMismatchError):
        metrics(_report([True, True, False]), truth)


def test_auc_examples():
    truth = GroundTruth(important=[True, False, True])
    assert auc_from_scores([3.0, 2.0, 1.0], truth) == 0.5
    assert auc_from_scores([1.0, 1.0, 1.0], truth) == 0.5
    assert auc_from_scores([5.0, 0.0, 4.0], truth) == 1.0
    with pytest.raises(ConfigurationError):
        auc_from_scores([1.0, 2.0], GroundTruth(important=[True, True]))


def test_wasserstein_examples():
    assert wasserstein_1d([0.3, 1.2, -4.0], [1.2, -4.0, 0.3]) == 0.0
    assert wasserstein_1d([0.0, 0.0], [1.0, 1.0]) == 1.0
    assert wasserstein_1d([0.0, 1.0], [0.5, 0.5]) == 0.5
    with pytest.raises(DimensionMismatchError):
        wasserstein_1d([0.0], [0.0, 1.0])


# ---- experiments -------------------------------------------------------------


def test_single_replicate_aggregates():
    setting = SyntheticSetting("adjacent", n=100, p=10)
    config = MethodConfig("knockoff", 0.2, STUMPS)
    report = run_replicated(setting, config, 1, RngStream(14))
    (record,) = report.records
    assert report.replicate_count == 1
    assert report.fdr == record.fdp
    assert report.power == record.power
    assert report.type_i_error == record.type_i
    assert report.auc == record.auc
    assert report.decoy_rejection_rate is None
    assert record.important == (0, 1)


def test_replicates_do_not_depend_on_workers():
    setting = SyntheticSetting("masked", n=80, p=6)
    config = MethodConfig(Method.WILCOXON, 0.05, STUMPS)
    serial = run_replicated(setting, config, 2, RngStream(15), workers=1)
    parallel = run_replicated(setting, config, 2, RngStream(15), workers=2)
    assert serial == parallel
    assert all(r.decoy_selected is not None for r in serial.records)


def test_oracle_replicate_uses_oracle_imputers():
    setting = SyntheticSetting("adjacent", n=100, p=8)
    config = MethodConfig("wilcoxon", 0.05, STUMPS, oracle=True)
    assert config.describe()["imputer"] == ImputerVariant.ORACLE.value
    report = run_replicated(setting, config, 1, RngStream(16))
    assert report.records[0].power > 0


def test_replicated_validation():
    setting = SyntheticSetting("adjacent", n=50, p=4)
    with pytest.raises(ConfigurationError):
        run_replicated(setting, MethodConfig("knockoff", 0.2, CONSTANT), 0, RngStream(1))


def test_snapshot_with_constant_model():
    rows = exchangeability_snapshot(SyntheticSetting("adjacent", n=60, p=8), CONSTANT, 0.1, 0.2, RngStream(17))
    assert len(rows) == 8
    assert all(row.statistic == 0.0 and row.threshold == math.inf for row in rows)
    assert [row.is_null for row in rows] == [False, False] + [True] * 6


def test_double_robustness_probe_with_oracle_nu():
    setting = SyntheticSetting("dr", n=200, p=6, correlation_rho=0.5)
    probe = double_robustness_probe(setting, STUMPS, 0.1, RngStream(18), nu_kind="oracle")
    assert probe.feature_index == 0
    np.testing.assert_array_equal(probe.estimated_vs_oracle, np.zeros(200))
    assert probe.estimated_vs_estimated.shape == (200,)


def test_double_robustness_probe_validation():
    setting = SyntheticSetting("dr", n=50, p=6)
    with pytest.raises(ConfigurationError):
        double_robustness_probe(setting, CONSTANT, 0.1, RngStream(1), nu_kind="forest")
    with pytest.raises(ConfigurationError):
        double_robustness_probe(setting, CONSTANT, 0.1, RngStream(1), feature_index=1)


def test_stability_curve_shape():
    points = stability_curve(SyntheticSetting("stability", n=50, p=10), [60, 120], 3, 0.1, RngStream(19))
    assert [point.n for point in points] == [60, 120]
    assert all(len(point.null_values) == 3 and len(point.important_values) == 3 for point in points)
    with pytest.raises(ConfigurationError):
        stability_curve(SyntheticSetting("stability", n=50, p=10), [1], 3, 0.1, RngStream(19))


def test_wasserstein_rate_of_constant_model_is_zero():
    points = wasserstein_rate(SyntheticSetting("adjacent", n=50, p=8), [40, 80], 2, CONSTANT, 0.1, RngStream(20))
    assert [point.null_median for point in points] == [0.0, 0.0]


# ---- Monte-Carlo checks ------------------------------------------------------


@pytest.mark.slow
def test_knockoff_fdr_on_adjacent_support():
    setting = SyntheticSetting("adjacent", n=300, p=50)
    config = MethodConfig("knockoff", 0.2, ModelSpec.parse("boosted_stumps"), lam=0.1)
    report = run_replicated(setting, config, 50, RngStream(2024), workers=2)
    assert report.fdr <= 0.25
    assert report.power >= 0.5




@pytest.mark.slow
def test_oracle_wilcoxon_rejects_nulls_at_nominal_rate():
    # 200 replicates x 10 null features
    setting = SyntheticSetting("adjacent", n=300, p=10)
    model = LinearModel(np.full(10, 0.5), 0.0)
    rejections = 0
    for replicate in range(200):
        stream = RngStream(3000 + replicate)
        data, truth = generate(setting, derive_stream(stream, 0))
        response = derive_stream(stream, 1).generator().standard_normal(300)
        null_data = TabularDataset(data.inputs, response)
        null_truth = GroundTruth(
            important=np.zeros(10, dtype=bool),
            generating_coefficients=np.zeros(10),
            design_covariance=truth.design_covariance,
            noise_sd=1.0,
            linear_gaussian=True,
        )
        report = run_semi_knockoffs(
            null_data,
            model,
            LossFunction.squared_error(),
            0.1,
            0.05,
            1,
            Method.WILCOXON,
            derive_stream(stream, 2),
            oracle=joint_gaussian_oracle(null_truth),
        )
        rejections += len(report.selected_indices)
    assert 0.029 <= rejections / 2000 <= 0.071


@pytest.mark.slow
def test_oracle_knockoff_fdr_on_adjacent_support():
    # 100 replicates: bound is q + 2 binomial standard errors
    setting = SyntheticSetting("adjacent", n=300, p=50)
    config = MethodConfig("knockoff", 0.2, ModelSpec.parse("boosted_stumps", rounds=50), oracle=True)
    report = run_replicated(setting, config, 100, RngStream(2025), workers=2)
    assert report.fdr <= 0.2 + 2.0 * math.sqrt(0.2 * 0.8 / 100)


@pytest.mark.slow
def test_masked_correlation_detects_relevant_feature_not_decoy():
    # 100 replicates; the decoy shares 80% of its variance with the relevant feature
    setting = SyntheticSetting("masked", n=300, p=50)
    config = MethodConfig("wilcoxon", 0.05, ModelSpec.parse("boosted_stumps", rounds=100), permutations=5)
    report = run_replicated(setting, config, 100, RngStream(2026), workers=2)
    assert report.method_config.lam == SettingKind.MASKED_CORRELATION.imputer_lambda == 1e-4
    assert report.power >= 0.6
    assert report.decoy_rejection_rate <= 0.08


@pytest.mark.slow
def test_null_stability_decreases_with_n():
    points = stability_curve(SyntheticSetting("stability", n=200, p=50), [200, 800, 3200], 20, 0.1, RngStream(21))
    medians = [point.null_median for point in points]
    assert medians[0] > medians[1] > medians[2]
    assert medians[2] <= 0.6 * medians[0]
    assert points[2].important_median >= 5.0 * points[2].null_median


@pytest.mark.slow
def test_wasserstein_distance_shrinks_with_n():
    points = wasserstein_rate(
        SyntheticSetting("stability", n=200, p=50), [200, 3200], 20, ModelSpec.parse("linear"), 0.1, RngStream(22)
    )
    assert points[0].null_median > 0.0
    assert points[1].null_median <= 0.6 * points[0].null_median


@pytest.mark.slow
def test_oracle_comparison_is_more_concentrated():
    setting = SyntheticSetting("dr", n=2000, p=10, correlation_rho=0.5)
    lam = SettingKind.DR_NONLINEAR.imputer_lambda
    passing = 0
    for seed in range(10):
        probe = double_robustness_probe(setting, ModelSpec.parse("boosted_stumps"), lam, RngStream(seed))
        blue, orange = probe.estimated_vs_estimated, probe.estimated_vs_oracle
        concentrated = np.std(orange) <= 0.75 * np.std(blue)
        centered = abs(np.mean(blue)) <= 3.0 * np.std(blue) / math.sqrt(blue.size)
        passing += concentrated and centered
    assert passing >= 8


@pytest.mark.slow
def test_injected_null_is_rarely_rejected():
    # 400 injections into one binary stand-in dataset with n=569, p=30
    base, _ = generate(SyntheticSetting("adjacent", n=569, p=30, sparsity=0.17), RngStream(2027))
    labels = (base.response > np.median(base.response)).astype(float)
    data = TabularDataset(base.inputs, labels, task_kind=TaskKind.BINARY_CLASSIFICATION)
    rejections = 0
    for seed in range(400):
        stream = RngStream(seed)
        augmented, index = inject_correlated_null(data, 0.6, derive_stream(stream, 0))
        model = fit_linear(augmented, 0.1)
        report = run_semi_knockoffs(
            augmented,
            model,
            default_loss(augmented.task_kind),
            0.1,
            0.05,
            1,
            Method.WILCOXON,
            derive_stream(stream, 1),
            features=[index],
        )
        rejections += index in report.selected_indices
    assert rejections / 400 <= 0.08
