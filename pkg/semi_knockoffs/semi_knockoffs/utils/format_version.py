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

"""Format version utilities for reports and run-configuration files.

Written reports carry a ``format_version`` field (e.g. ``1.0.0``).
Compatibility rule (semver-like):
  * **Major** must match exactly, otherwise the file is rejected.
  * **Minor** of the file newer than the tool: accepted with a warning.
  * **Patch** is ignored.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Optional

from .. import REPORT_FORMAT_VERSION
from ..exceptions import FormatVersionError

logger = logging.getLogger(__name__)

_VERSION_RE = re.compile(r"^v?(\d+)\.(\d+)\.(\d+)$")


@dataclass(frozen=True)
class SemanticVersion:
    """A parsed semantic version (major, minor, patch)."""

    major: int
    minor: int
    patch: int

    def __str__(self) -> str:
        return f"{self.major}.{self.minor}.{self.patch}"


def parse_format_version(raw: str) -> SemanticVersion:
    """Parse ``MAJOR.MINOR.PATCH`` (an optional leading 'v' is allowed).

    Raises:
        FormatVersionError: If the string cannot be parsed.
    """
    if not isinstance(raw, str):
        raise FormatVersionError(f"Format version must be a string, got {type(raw).__name__}: {raw!r}")

    m = _VERSION_RE.match(raw.strip())
    if m is None:
        raise FormatVersionError(
            f"Invalid format version string: '{raw}'. Expected 'MAJOR.MINOR.PATCH' (e.g. '1.0.0')."
        )
    return SemanticVersion(int(m.group(1)), int(m.group(2)), int(m.group(3)))


def ensure_compatible_format(raw_version: Optional[str], source: str) -> Optional[SemanticVersion]:
    """Check a file's declared format version against this tool.

    A missing version is accepted (plain hand-written config files have
    none). A major mismatch raises; a newer minor version logs a warning.

    Returns:
        The parsed version, or None when the file declares none.
    """
    if raw_version is None:
        return None

    supported = parse_format_version(REPORT_FORMAT_VERSION)
    file_version = parse_format_version(raw_version)

    if file_version.major != supported.major:
        raise FormatVersionError(
            f"{source}: format version {file_version} is incompatible "
            f"(this tool reads major version {supported.major}, supported: {supported})"
        )
    if file_version.minor > supported.minor:
        logger.warning(
            f"{source}: format version {file_version} is newer than the supported {supported}; "
            "unknown fields are ignored"
        )
    return file_version
