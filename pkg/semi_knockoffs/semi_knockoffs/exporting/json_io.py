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

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Union

from .. import REPORT_FORMAT_VERSION
from ..exceptions import ConfigurationError
from ..inference.report import SelectionReport
from ..simbench.experiments import ExperimentReport
from ..simbench.settings import DR_NOISE_VARIANCE, SettingKind
from .schema import ExperimentReportPayload, FeatureRecord, PayloadKind, ProbePayload, SelectionReportPayload

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def build_selection_report(report: SelectionReport, config: Mapping[str, Any]) -> SelectionReportPayload:
    """Schema-versioned payload of a SelectionReport.

    An infinite knockoff threshold is written as null with no_threshold set.
    """
    features = [
        FeatureRecord(
            index=d.feature_index,
            name=d.name,
            statistic=float(d.statistic),
            p_value=_finite_or_none(d.p_value),
            selected=bool(d.selected),
        )
        for d in report.decisions
    ]
    payload: SelectionReportPayload = {
        "format_version": REPORT_FORMAT_VERSION,
        "kind": "selection_report",
        "method": report.method.value,
        "level": report.target_level,
        "seed": report.seed,
        "permutations": report.permutations,
        "imputer": report.variant.value,
        "threshold": _finite_or_none(report.threshold),
        "no_threshold": report.threshold is not None and not math.isfinite(report.threshold),
        "n_features": report.n_features,
        "selected": report.selected_indices,
        "features": features,
        "config": dict(config),
    }
    return payload


def build_experiment_report(report: ExperimentReport, config: Mapping[str, Any]) -> ExperimentReportPayload:
    setting = report.setting
    setting_payload = {
        "kind": setting.kind.value,
        "n": setting.n,
        "p": setting.p,
        "correlation_rho": setting.correlation_rho,
        "noise_sd": setting.noise_sd,
        "sparsity": setting.sparsity,
    }
    if setting.kind is SettingKind.DR_NONLINEAR:
        setting_payload["noise_variance"] = DR_NOISE_VARIANCE
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "kind": "experiment_report",
        "seed": report.seed,
        "setting": setting_payload,
        "method": report.method_config.describe(),
        "replicate_count": report.replicate_count,
        "aggregates": report.aggregates(),
        "replicates": [
            {
                "replicate": r.replicate,
                "fdp": r.fdp,
                "power": r.power,
                "type_i": r.type_i,
                "auc": r.auc,
                "selected": list(r.selected),
                "important": list(r.important),
                "decoy_selected": r.decoy_selected,
            }
            for r in report.records
        ],
        "config": dict(config),
    }


def build_probe(
    kind: PayloadKind,
    seed: int,
    rows: Iterable[Mapping[str, Any]],
    config: Mapping[str, Any],
    summary: Optional[Mapping[str, Any]] = None,
) -> ProbePayload:
    payload: ProbePayload = {
        "format_version": REPORT_FORMAT_VERSION,
        "kind": kind,
        "seed": seed,
        "rows": [dict(r) for r in rows],
        "config": dict(config),
    }
    if summary is not None:
        payload["summary"] = dict(summary)
    return payload


def save_json(output_path: PathLike, payload: Mapping[str, Any]) -> None:
    """Write *payload* as UTF-8 JSON with two-space indentation and a final newline."""
    path = Path(output_path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    try:
        text = json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False)
    except ValueError as e:
        raise ConfigurationError(f"report contains a non-finite number: {e}") from e
    path.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Saved JSON: {path}")


def load_json(input_path: PathLike) -> Dict[str, Any]:
    path = Path(input_path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"file not found: {path}") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"failed to parse JSON file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must contain a JSON object")
    return data
