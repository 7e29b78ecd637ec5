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
import pickle

import numpy as np
import pytest

from semi_knockoffs.config import RunSettings
from semi_knockoffs.core.dataset import TabularDataset, TaskKind, load_dataset
from semi_knockoffs.core.losses import LossFunction, default_loss, evaluate_loss
from semi_knockoffs.core.rng import RngStream, derive_stream, stream_from_seed
from semi_knockoffs.exceptions import (
    ConfigurationError,
    ConstantTargetError,
    ConvergenceError,
    DatasetError,
    DimensionMismatchError,
    FeatureProcessingError,
    FormatVersionError,
    MissingColumnError,
    NonFiniteValueError,
    NonNumericCellError,
    SeparationError,
    SingularSystemError,
    TooFewRowsError,
)
from semi_knockoffs.models.constant import ConstantModel
from semi_knockoffs.models.linear import LinearModel
from semi_knockoffs.utils.format_version import ensure_compatible_format, parse_format_version


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# ---- dataset -----------------------------------------------------------------


def test_load_dataset_binary_target(tmp_path):
    path = _write(tmp_path, "a,b,y\n1,2,0\n3,4,1\n5,6,0\n")
    data = load_dataset(path, "y")
    assert data.n_samples == 3
    assert data.n_features == 2
    assert data.task_kind is TaskKind.BINARY_CLASSIFICATION
    np.testing.assert_array_equal(data.response, [0.0, 1.0, 0.0])
    np.testing.assert_array_equal(data.inputs, [[1, 2], [3, 4], [5, 6]])
    assert data.column_names == ("a", "b")


def test_load_dataset_missing_target(tmp_path):
    path = _write(tmp_path, "a,b,y\n1,2,0\n3,4,1\n5,6,0\n")
    with pytest.raises(MissingColumnError, match="'z'"):
        load_dataset(path, "z")


def test_load_dataset_regression_target(tmp_path):
    path = _write(tmp_path, "a,y\n1,1.5\n2,2.5\n3,3.5\n")
    assert load_dataset(path, "y").task_kind is TaskKind.REGRESSION


def test_binary_target_is_remapped_by_ascending_value(tmp_path):
    path = _write(tmp_path, "a,y\n1,7\n2,3\n3,7\n")
    np.testing.assert_array_equal(load_dataset(path, "y").response, [1.0, 0.0, 1.0])


def test_load_dataset_non_numeric_cell_names_line(tmp_path):
    path = _write(tmp_path, "a,y\n1,1.5\nfoo,2.5\n3,3.5\n")
    with pytest.raises(NonNumericCellError, match="line 3"):
        load_dataset(path, "y")


def test_load_dataset_errors(tmp_path):
    with pytest.raises(TooFewRowsError):
        load_dataset(_write(tmp_path, "a,y\n1,2\n", "one.csv"), "y")
    with pytest.raises(ConstantTargetError):
        load_dataset(_write(tmp_path, "a,y\n1,2\n3,2\n", "flat.csv"), "y")
    with pytest.raises(DatasetError):
        load_dataset(tmp_path / "absent.csv", "y")
    with pytest.raises(DatasetError):
        load_dataset(_write(tmp_path, "y\n1\n2\n", "only_target.csv"), "y")


def test_dataset_arrays_are_read_only(gaussian_data):
    with pytest.raises(ValueError):
        gaussian_data.inputs[0, 0] = 1.0
    assert gaussian_data.other_columns(2).shape == (200, 3)
    assert gaussian_data.feature_name(3) == "x3"


def test_dataset_validation():
    with pytest.raises(DimensionMismatchError):
        TabularDataset(np.zeros((3, 2)), np.zeros(4))
    with pytest.raises(DatasetError):
        TabularDataset(np.array([[1.0], [np.nan]]), np.zeros(2))
    with pytest.raises(DatasetError):
        TabularDataset(np.zeros((3, 1)), np.array([0.0, 2.0, 1.0]), task_kind=TaskKind.BINARY_CLASSIFICATION)
    with pytest.raises(DimensionMismatchError):
        TabularDataset(np.zeros((3, 2)), np.zeros(3)).check_feature_index(2)


# ---- losses ------------------------------------------------------------------


def test_evaluate_loss_constant_zero_model():
    losses = evaluate_loss(ConstantModel(0.0), LossFunction.squared_error(), np.zeros((2, 1)), np.array([1.0, 2.0]))
    np.testing.assert_allclose(losses, [1.0, 4.0])


def test_evaluate_loss_perfect_model_is_zero():
    inputs = np.array([[1.0], [-2.0], [0.5]])
    model = LinearModel(np.array([1.0]), 0.0)
    losses = evaluate_loss(model, LossFunction.squared_error(), inputs, inputs[:, 0])
    np.testing.assert_array_equal(losses, np.zeros(3))


def test_cross_entropy_of_half_is_log_two():
    losses = evaluate_loss(
        ConstantModel(0.5), LossFunction.cross_entropy(1e-9), np.zeros((2, 3)), np.array([0.0, 1.0])
    )
    np.testing.assert_allclose(losses, [math.log(2.0), math.log(2.0)])


def test_losses_are_nonnegative_and_zero_on_match():
    rng = np.random.default_rng(0)
    u = rng.random(10_000)
    y = (rng.random(10_000) < 0.5).astype(float)
    assert np.all(LossFunction.cross_entropy()(u, y) >= 0)
    assert np.all(LossFunction.squared_error()(u, y) >= 0)
    np.testing.assert_array_equal(LossFunction.squared_error()(u, u), np.zeros(10_000))
    assert np.all(LossFunction.cross_entropy()(y, y) < 1e-9)


def test_evaluate_loss_rejects_non_finite_predictions():
    class NanModel(ConstantModel):
        def predict(self, inputs):
            out = np.zeros(len(inputs))
            out[1] = np.nan
            return out

    with pytest.raises(NonFiniteValueError) as info:
        evaluate_loss(NanModel(), LossFunction.squared_error(), np.zeros((3, 1)), np.zeros(3))
    assert info.value.row_index == 1


def test_default_loss_follows_task_kind():
    assert default_loss(TaskKind.BINARY_CLASSIFICATION) == LossFunction.cross_entropy()
    assert default_loss("regression") == LossFunction.squared_error()
    with pytest.raises(ConfigurationError):
        LossFunction.from_name("hinge")


# ---- random streams ----------------------------------------------------------


def test_same_stream_reproduces_draws():
    root = RngStream(42)
    first = derive_stream(root, 3).generator().random(100)
    second = derive_stream(RngStream(42), 3).generator().random(100)
    np.testing.assert_array_equal(first, second)


def test_sibling_streams_differ():
    root = RngStream(42)
    zero = derive_stream(root, 0).generator().random(100)
    one = derive_stream(root, 1).generator().random(100)
    assert np.any(zero != one)


def test_nested_children_are_paths():
    root = RngStream(7)
    nested = derive_stream(derive_stream(root, 2), 5)
    assert nested == RngStream(7, (2, 5))
    assert [derive_stream(root, e).stream_path for e in range(3)] == [(0,), (1,), (2,)]
    again = RngStream(7, (2, 5)).generator().integers(0, 1000, 20)
    np.testing.assert_array_equal(nested.generator().integers(0, 1000, 20), again)


def test_stream_validation_and_fresh_seed():
    with pytest.raises(ConfigurationError):
        RngStream(-1)
    with pytest.raises(ConfigurationError):
        RngStream(2**64)
    assert stream_from_seed(9).root_seed == 9
    fresh = stream_from_seed(None)
    assert 0 <= fresh.root_seed < 2**64


# ---- settings and errors -----------------------------------------------------


def test_run_settings_from_env(monkeypatch):
    monkeypatch.setenv("SEMIKNOCK_SEED", "123")
    monkeypatch.setenv("SEMIKNOCK_WORKERS", "3")
    monkeypatch.setenv("SEMIKNOCK_LOG_LEVEL", "DEBUG")
    settings = RunSettings.from_env()
    assert settings.seed == 123
    assert settings.workers == 3
    assert settings.log_level == "DEBUG"


def test_run_settings_rejects_bad_integer(monkeypatch):
    monkeypatch.setenv("SEMIKNOCK_SEED", "seven")
    with pytest.raises(ConfigurationError, match="SEMIKNOCK_SEED"):
        RunSettings.from_env()


def test_run_settings_defaults(monkeypatch):
    monkeypatch.delenv("SEMIKNOCK_SEED", raising=False)
    monkeypatch.delenv("SEMIKNOCK_WORKERS", raising=False)
    settings = RunSettings.from_env()
    assert settings.seed is None
    assert settings.workers >= 1


def test_exit_codes_by_family():
    assert MissingColumnError("x").exit_code == 2
    assert SeparationError("x").exit_code == 3
    assert SingularSystemError("x").exit_code == 4
    wrapped = FeatureProcessingError(3, SeparationError("separated"))
    assert wrapped.exit_code == 3
    assert wrapped.feature_index == 3


@pytest.mark.parametrize(
    "error",
    [
        ConvergenceError("no convergence", 100),
        NonFiniteValueError("nan", row_index=4),
        FeatureProcessingError(2, SingularSystemError("singular")),
    ],
)
def test_exceptions_survive_pickling(error):
    restored = pickle.loads(pickle.dumps(error))
    assert type(restored) is type(error)
    assert str(restored) == str(error)
    assert restored.exit_code == error.exit_code


def test_format_version_compatibility(caplog):
    assert parse_format_version("v1.2.3").minor == 2
    assert ensure_compatible_format(None, "cfg") is None
    assert ensure_compatible_format("1.0.7", "cfg").patch == 7
    with pytest.raises(FormatVersionError):
        ensure_compatible_format("2.0.0", "cfg")
    with pytest.raises(FormatVersionError):
        parse_format_version("1.0")
    with caplog.at_level("WARNING"):
        ensure_compatible_format("1.5.0", "cfg")
    assert "newer" in caplog.text
