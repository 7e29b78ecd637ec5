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

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Optional

import jsonschema

from .. import REPORT_FORMAT_VERSION
from ..exceptions import ConfigurationError
from .schema_loader import load_schema

JsonPointer = str


@dataclass(frozen=True)
class SchemaIssue:
    message: str
    path: Optional[JsonPointer] = None

    def __str__(self) -> str:
        return f"{self.path}: {self.message}" if self.path else self.message


def _pointer(error: jsonschema.ValidationError) -> JsonPointer:
    return "/" + "/".join(str(p) for p in error.absolute_path) if error.absolute_path else ""


def validate_against_schema(data: Any, schema_name: str, version: str = REPORT_FORMAT_VERSION) -> List[SchemaIssue]:
    """Every JSON Schema violation of *data*, ordered by location."""
    if not isinstance(data, dict):
        return [SchemaIssue(message="root must be a mapping/object", path="")]
    schema = load_schema(schema_name, version)
    validator_class = jsonschema.validators.validator_for(schema)
    validator = validator_class(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    return [SchemaIssue(message=e.message, path=_pointer(e)) for e in errors]


def ensure_valid(data: Any, schema_name: str, what: str, version: str = REPORT_FORMAT_VERSION) -> None:
    """Raise ConfigurationError naming the first violation of *schema_name*."""
    issues = validate_against_schema(data, schema_name, version)
    if issues:
        more = f" (and {len(issues) - 1} more)" if len(issues) > 1 else ""
        raise ConfigurationError(f"invalid {what}: {issues[0]}{more}")
