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

"""Run-configuration files: YAML, JSON, or a previously written report."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from ..exceptions import ConfigurationError
from ..utils.format_version import ensure_compatible_format

logger = logging.getLogger(__name__)

_YAML_SUFFIXES = (".yaml", ".yml")


def _read_mapping(path: Path) -> Dict[str, Any]:
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"failed to read configuration file {path}: {exc}") from exc
    try:
        if path.suffix.lower() in _YAML_SUFFIXES:
            data = yaml.safe_load(content)
        else:
            data = json.loads(content)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"failed to parse configuration file {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"configuration file {path} must contain a mapping at the root")
    return data


def load_config_file(file_path: Union[str, Path]) -> Dict[str, Any]:
    """Load configuration values from *file_path*.

    A written report is recognised by its format_version and config
    keys; its embedded configuration is returned after a format-version
    compatibility check.
    """
    path = Path(file_path)
    if not path.is_file():
        raise ConfigurationError(f"configuration file not found: {path}")
    data = _read_mapping(path)

    if "format_version" in data and "config" in data:
        ensure_compatible_format(data.get("format_version"), str(path))
        embedded = data["config"]
        if not isinstance(embedded, dict):
            raise ConfigurationError(f"embedded configuration in {path} is not a mapping")
        logger.info(f"Using the configuration embedded in {path}")
        return dict(embedded)

    if "format_version" in data:
        ensure_compatible_format(data.pop("format_version"), str(path))
    logger.debug(f"Loaded configuration file {path}")
    return data
