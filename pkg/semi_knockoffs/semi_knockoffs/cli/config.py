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

"""Resolution of the run configuration of one CLI invocation.

Values are layered as subcommand defaults, then the environment, then a
configuration file, then explicit flags; the merged mapping is validated
against the cli_config schema before it becomes a CliConfig.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields
from typing import Any, Dict, Mapping, Optional, Tuple

from ..config import RunSettings
from ..core.rng import stream_from_seed
from ..exceptions import ConfigurationError
from ..inference.pipeline import LAMBDA_GCV, Lambda
from ..inference.report import Method
from ..parsing.config_loader import load_config_file
from ..parsing.schema_validation import ensure_valid
from ..simbench.settings import DR_CORRELATION, SettingKind

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("select", "test", "simulate", "stability", "dr-check", "inject-null", "snapshot")

# file/flag key -> CliConfig field, where they differ
_FIELD_FOR_KEY = {
    "data": "data_path",
    "target": "target_column",
    "model": "model_spec",
    "lambda": "lam",
    "output": "output_path",
    "format": "output_format",
}
_KEY_FOR_FIELD = {f: k for k, f in _FIELD_FOR_KEY.items()}

# never embedded in outputs: they change where and how fast, not what
RUNTIME_KEYS = ("workers", "output", "format")

_SELECTION_DEFAULTS = {"model": "boosted_stumps", "loss": "auto", "lambda": 0.1, "permutations": 1, "strict": False}

SUBCOMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "select": {**_SELECTION_DEFAULTS, "method": "knockoff_threshold", "level": 0.2},
    "test": {**_SELECTION_DEFAULTS, "method": "wilcoxon", "level": 0.05},
    "simulate": {
        "setting": "adjacent",
        "n": 300,
        "p": 50,
        "reps": 50,
        "correlation": 0.6,
        "noise_sd": 1.0,
        "sparsity": 0.25,
        "model": "boosted_stumps",
        "loss": "auto",
        "method": "knockoff_threshold",
        "level": 0.2,
        "permutations": 1,
        "oracle": False,
    },
    "stability": {
        "setting": "stability",
        "sizes": [200, 800, 3200],
        "p": 50,
        "seeds": 20,
        "correlation": 0.6,
        "sparsity": 0.25,
        "lambda": 0.1,
        "probe": "coefficients",
        "model": "linear",
    },
    "dr-check": {
        "setting": "dr",
        "n": 2000,
        "p": 10,
        "correlation": DR_CORRELATION,
        "model": "boosted_stumps",
        "nu": "ridge",
    },
    "inject-null": {"corr": 0.6},
    "snapshot": {
        "setting": "adjacent",
        "n": 300,
        "p": 50,
        "correlation": 0.6,
        "noise_sd": 1.0,
        "sparsity": 0.25,
        "model": "boosted_stumps",
        "level": 0.2,
        "permutations": 1,
    },
}

ALLOWED_METHODS = {
    "select": (Method.KNOCKOFF_THRESHOLD, Method.BH_ON_WILCOXON),
    "test": (Method.WILCOXON, Method.SIGN_TEST),
}


@dataclass(frozen=True)
class CliConfig:
    """Fully resolved configuration of one run.

    seed is always set: a missing seed is drawn once during resolution so
    the written report can reproduce the run.
    """

    subcommand: str
    seed: int
    data_path: Optional[str] = None
    target_column: Optional[str] = None
    model_spec: Optional[str] = None
    loss: Optional[str] = None
    lam: Optional[Lambda] = None
    level: Optional[float] = None
    permutations: Optional[int] = None
    method: Optional[str] = None
    features: Optional[Tuple[int, ...]] = None
    strict: Optional[bool] = None
    rounds: Optional[int] = None
    learning_rate: Optional[float] = None
    ridge_lambda: Optional[float] = None
    timeout: Optional[float] = None
    setting: Optional[str] = None
    n: Optional[int] = None
    p: Optional[int] = None
    reps: Optional[int] = None
    correlation: Optional[float] = None
    noise_sd: Optional[float] = None
    sparsity: Optional[float] = None
    oracle: Optional[bool] = None
    sizes: Optional[Tuple[int, ...]] = None
    seeds: Optional[int] = None
    probe: Optional[str] = None
    nu: Optional[str] = None
    corr: Optional[float] = None
    workers: int = 1
    output_path: Optional[str] = None
    output_format: str = "json"

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "CliConfig":
        known = {f.name for f in fields(cls)}
        kwargs: Dict[str, Any] = {}
        for key, value in values.items():
            name = _FIELD_FOR_KEY.get(key, key)
            if name not in known:
                raise ConfigurationError(f"unknown configuration key '{key}'")
            if isinstance(value, list):
                value = tuple(value)
            kwargs[name] = value
        return cls(**kwargs)

    def embedded(self) -> Dict[str, Any]:
        """Configuration echoed into every output file, in a fixed key order."""
        result: Dict[str, Any] = {}
        for f in fields(self):
            key = _KEY_FOR_FIELD.get(f.name, f.name)
            value = getattr(self, f.name)
            if key in RUNTIME_KEYS or value is None:
                continue
            result[key] = list(value) if isinstance(value, tuple) else value
        return result

    @property
    def method_enum(self) -> Method:
        return Method.parse(self.method)

    def default_output(self) -> str:
        return f"{self.subcommand}_report.{self.output_format}"

    @property
    def fixed_lambda(self) -> float:
        if self.lam == LAMBDA_GCV:
            raise ConfigurationError(f"'{self.subcommand}' needs a numeric --lambda, not '{LAMBDA_GCV}'")
        return float(self.lam)


def _normalize(values: Dict[str, Any], subcommand: str) -> Dict[str, Any]:
    if "method" in values and isinstance(values["method"], str):
        method = Method.parse(values["method"])
        allowed = ALLOWED_METHODS.get(subcommand)
        if allowed is not None and method not in allowed:
            choices = ", ".join(m.value for m in allowed)
            raise ConfigurationError(f"'{subcommand}' does not support method '{method.value}' (choose from {choices})")
        values["method"] = method.value
    if isinstance(values.get("lambda"), str) and values["lambda"] != LAMBDA_GCV:
        try:
            values["lambda"] = float(values["lambda"])
        except ValueError as exc:
            raise ConfigurationError(f"lambda must be a number or '{LAMBDA_GCV}', got {values['lambda']!r}") from exc
    return values


def resolve_config(
    subcommand: str,
    flags: Mapping[str, Any],
    config_file: Optional[str] = None,
    settings: Optional[RunSettings] = None,
) -> CliConfig:
    """Merge defaults, environment, *config_file* and *flags* into a CliConfig."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigurationError(f"unknown subcommand '{subcommand}'")
    settings = settings if settings is not None else RunSettings.from_env()

    values: Dict[str, Any] = dict(SUBCOMMAND_DEFAULTS[subcommand])
    values["workers"] = settings.workers
    if settings.seed is not None:
        values["seed"] = settings.seed

    if config_file is not None:
        from_file = load_config_file(config_file)
        recorded = from_file.pop("subcommand", subcommand)
        if recorded != subcommand:
            raise ConfigurationError(f"{config_file} configures '{recorded}', not '{subcommand}'")
        values.update(from_file)

    values.update(flags)
    values["subcommand"] = subcommand
    if "lambda" not in values and "setting" in values:
        values["lambda"] = SettingKind.parse(values["setting"]).imputer_lambda
    values = _normalize(values, subcommand)
    ensure_valid(values, "cli_config", "configuration")

    if values.get("seed") is None:
        values["seed"] = stream_from_seed(None).root_seed
    config = CliConfig.from_mapping(values)
    logger.debug(f"Resolved configuration: {config.embedded()}")
    return config
