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

"""Semi-knockoffs: conditional independence testing for pre-trained models."""

# Version of the on-disk report/config format written by this tool.
# Reports declare it via the ``format_version`` field. Files whose *major*
# version matches are accepted; a newer *minor* version only warns.
REPORT_FORMAT_VERSION = "1.0.0"

__version__ = "0.1.0"

__all__ = [
    "cli",
    "config",
    "core",
    "exceptions",
    "exporting",
    "file_io",
    "imputer",
    "inference",
    "models",
    "parsing",
    "sampler",
    "simbench",
    "utils",
    "REPORT_FORMAT_VERSION",
]
