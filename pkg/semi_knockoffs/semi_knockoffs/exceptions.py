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

"""Exception hierarchy for semi_knockoffs.

Every class carries the CLI exit code of its error family:
2 for input/configuration problems, 3 for model and bridge failures,
4 for numerical failures.
"""

from typing import Optional


class SemiKnockoffError(Exception):
    """Base exception for semi_knockoffs errors."""

    exit_code = 1


class InputError(SemiKnockoffError):
    """Exception raised for malformed inputs (files, flags, shapes)."""

    exit_code = 2


class DatasetError(InputError):
    """Exception raised when a dataset cannot be loaded or is invalid."""

    pass


class MissingColumnError(DatasetError):
    """Exception raised when a requested column is absent from the file."""

    pass


class NonNumericCellError(DatasetError):
    """Exception raised when a cell cannot be parsed as a real number."""

    pass


class TooFewRowsError(DatasetError):
    """Exception raised when a dataset has fewer than two rows."""

    pass


class ConstantTargetError(DatasetError):
    """Exception raised when the target column takes a single value."""

    pass


class DimensionMismatchError(InputError):
    """Exception raised when array shapes do not agree."""

    pass


class ConfigurationError(InputError):
    """Exception raised for invalid run configuration."""

    pass


class FormatVersionError(ConfigurationError):
    """Exception raised when a config or report format version is incompatible."""

    pass


class ModelError(SemiKnockoffError):
    """Exception raised for predictive-model failures."""

    exit_code = 3


class ConvergenceError(ModelError):
    """Exception raised when an iterative fit does not converge."""

    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations

    def __reduce__(self):
        return (type(self), (self.args[0], self.iterations))


class SeparationError(ModelError):
    """Exception raised when a logistic fit detects perfect separation."""

    pass


class BridgeError(ModelError):
    """Exception raised for external-model bridge failures."""

    pass


class BridgeTimeoutError(BridgeError):
    """Exception raised when the bridge does not answer in time."""

    pass


class BridgeProtocolError(BridgeError):
    """Exception raised for malformed bridge messages."""

    pass


class BridgeLengthMismatchError(BridgeError):
    """Exception raised when the bridge returns the wrong number of predictions."""

    pass


class BridgeClosedError(BridgeError):
    """Exception raised when a closed or failed session is used."""

    pass


class NumericalError(SemiKnockoffError):
    """Exception raised for numerical failures."""

    exit_code = 4


class SingularSystemError(NumericalError):
    """Exception raised when a linear system cannot be solved."""

    pass


class CovarianceError(NumericalError):
    """Exception raised for non positive-definite covariance matrices."""

    pass


class NonFiniteValueError(NumericalError):
    """Exception raised when a model produces a non-finite value."""

    def __init__(self, message: str, row_index: Optional[int] = None):
        super().__init__(message)
        self.row_index = row_index

    def __reduce__(self):
        return (type(self), (self.args[0], self.row_index))


class FeatureProcessingError(SemiKnockoffError):
    """Exception raised when the pipeline fails for one feature."""

    def __init__(self, feature_index: int, cause: Exception):
        super().__init__(f"feature {feature_index}: {cause}")
        self.feature_index = feature_index
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", SemiKnockoffError.exit_code)

    def __reduce__(self):
        return (type(self), (self.feature_index, self.cause))
