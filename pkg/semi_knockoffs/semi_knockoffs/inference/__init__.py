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

from .paired import PairedLossSample, paired_losses
from .pipeline import LAMBDA_GCV, FeatureOutcome, feature_losses, feature_pair, resolve_lambda, run_semi_knockoffs
from .report import FeatureDecision, Method, SelectionReport
from .selection import benjamini_hochberg, knockoff_threshold
from .rank_tests import WILCOXON_EXACT_CUTOFF, sign_test, wilcoxon_signed_rank

__all__ = [
    "LAMBDA_GCV",
    "WILCOXON_EXACT_CUTOFF",
    "FeatureDecision",
    "FeatureOutcome",
    "Method",
    "PairedLossSample",
    "SelectionReport",
    "benjamini_hochberg",
    "feature_losses",
    "feature_pair",
    "knockoff_threshold",
    "paired_losses",
    "resolve_lambda",
    "run_semi_knockoffs",
    "sign_test",
    "wilcoxon_signed_rank",
]
