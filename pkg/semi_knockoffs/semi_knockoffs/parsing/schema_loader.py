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

"""Loader for the versioned JSON Schemas shipped in semi_knockoffs/schema."""

import json
from pathlib import Path
from typing import Dict

from ..exceptions import ConfigurationError
from ..utils.format_version import parse_format_version

_SCHEMA_DIR = Path(__file__).parent.parent / "schema"

# Schema cache to avoid reloading files
_SCHEMA_CACHE: Dict[str, dict] = {}


def get_schema_path(schema_name: str, major_minor: str) -> Path:
    return _SCHEMA_DIR / major_minor / f"{schema_name}.json"


def resolve_schema_version(version: str) -> str:
    """Schema directory (MAJOR.MINOR) for a MAJOR.MINOR.PATCH format version.

    Falls back to the largest available minor within the same major.
    """
    parsed = parse_format_version(version)
    exact = f"{parsed.major}.{parsed.minor}"
    if (_SCHEMA_DIR / exact).is_dir():
        return exact

    candidates = []
    for version_dir in _SCHEMA_DIR.iterdir():
        major, _, minor = version_dir.name.partition(".")
        if version_dir.is_dir() and major.isdigit() and minor.isdigit() and int(major) == parsed.major:
            candidates.append((int(minor), version_dir.name))
    if not candidates:
        raise ConfigurationError(f"no schema available for format version {version}")
    return max(candidates)[1]


def load_schema(schema_name: str, version: str) -> dict:
    """Load the JSON Schema *schema_name* for format *version* (cached)."""
    resolved = resolve_schema_version(version)
    cache_key = f"{schema_name}-v{resolved}"
    if cache_key in _SCHEMA_CACHE:
        return _SCHEMA_CACHE[cache_key]

    schema_path = get_schema_path(schema_name, resolved)
    if not schema_path.exists():
        raise ConfigurationError(f"schema file not found for {schema_name} version {version}: {schema_path}")
    with open(schema_path, "r", encoding="utf-8") as f:
        schema = json.load(f)

    _SCHEMA_CACHE[cache_key] = schema
    return schema


def clear_cache() -> None:
    """Clear the schema cache. Useful for testing."""
    _SCHEMA_CACHE.clear()
