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

"""The semi-knockoffs command line."""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from .. import __version__
from ..config import RunSettings
from ..core.dataset import TabularDataset, load_dataset
from ..core.losses import LossFunction, default_loss
from ..core.rng import RngStream, derive_stream
from ..exceptions import ConfigurationError, SemiKnockoffError
from ..exporting.csv_io import dataset_frame, experiment_frame, rows_frame, save_csv, selection_frame
from ..exporting.json_io import build_experiment_report, build_probe, build_selection_report, save_json
from ..file_io.template_renderer import TemplateRenderer
from ..inference.pipeline import LAMBDA_GCV, run_semi_knockoffs
from ..models.spec import ModelSpec
from ..parsing.schema_validation import ensure_valid
from ..simbench.experiments import (
    MethodConfig,
    double_robustness_probe,
    exchangeability_snapshot,
    run_replicated,
    stability_curve,
    wasserstein_rate,
)
from ..simbench.settings import SettingKind, SyntheticSetting, inject_correlated_null
from .config import CliConfig, resolve_config

logger = logging.getLogger(__name__)

_MODEL_STREAM = 0
_DRAW_STREAM = 1


# ---- argument types ----------------------------------------------------------


def _level(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number in (0, 1], got {text!r}")
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"level must lie in (0, 1], got {text}")
    return value


def _lambda(text: str):
    if text == LAMBDA_GCV:
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative number or '{LAMBDA_GCV}', got {text!r}")
    if value < 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"lambda must be a finite number >= 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def _size_list(text: str) -> List[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sample sizes, got {text!r}")
    if not sizes or any(n < 2 for n in sizes):
        raise argparse.ArgumentTypeError(f"sample sizes must be integers >= 2, got {text!r}")
    return sizes


# ---- parser ------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", dest="config_file", help="YAML/JSON configuration file or a previous report")
    common.add_argument("--seed", type=_seed, help="root seed (default: $SEMIKNOCK_SEED or a fresh seed)")
    common.add_argument("--workers", type=_positive_int, help="parallel workers (default: available CPUs)")
    common.add_argument("--output", help="output file (default: <subcommand>_report.<format>)")
    common.add_argument("--format", choices=("json", "csv"), help="output format (default: json)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    return common


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", help="linear, boosted_stumps, constant:<value> or external:<path>")
    parser.add_argument("--rounds", type=_positive_int, help="boosting rounds")
    parser.add_argument("--learning-rate", dest="learning_rate", type=float, help="boosting learning rate")
    parser.add_argument("--ridge-lambda", dest="ridge_lambda", type=float, help="penalty of the linear model")
    parser.add_argument("--timeout", type=float, help="per-request timeout of an external model, in seconds")


def _add_level(parser: argparse.ArgumentParser, default_help: str) -> None:
    parser.add_argument("--q", "--alpha", dest="level", type=_level, help=f"target level in (0, 1] ({default_help})")


def _add_imputer_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lambda", type=_lambda, help="ridge penalty of the imputers, or 'gcv'")
    parser.add_argument("--permutations", type=_positive_int, help="residual permutations per feature")


def _add_setting_options(parser: argparse.ArgumentParser, with_n: bool = True) -> None:
    parser.add_argument("--setting", help="adjacent, masked, heavy, dr or stability")
    if with_n:
        parser.add_argument("--n", type=_positive_int, help="samples per dataset")
    parser.add_argument("--p", type=_positive_int, help="number of features")
    parser.add_argument("--correlation", type=float, help="AR(1) correlation of the design")
    parser.add_argument("--noise-sd", dest="noise_sd", type=float, help="noise standard deviation")
    parser.add_argument("--sparsity", type=float, help="fraction of important features")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semi-knockoffs",
        description="Conditional independence tests and FDR-controlled selection for pre-trained models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    common = _common_parser()

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, parents=[common], help=help_text, argument_default=argparse.SUPPRESS)

    for name, help_text, methods, level_help in (
        ("select", "FDR-controlled feature selection", "knockoff_threshold, bh_on_wilcoxon", "default 0.2"),
        ("test", "per-feature conditional independence p-values", "wilcoxon, sign_test", "default 0.05"),
    ):
        sub = add(name, help_text)
        sub.add_argument("--data", help="CSV file with a header row")
        sub.add_argument("--target", help="name of the response column")
        sub.add_argument("--loss", choices=("auto", "squared_error", "cross_entropy"))
        sub.add_argument("--method", help=methods)
        sub.add_argument(
            "--feature", dest="features", action="append", type=int, help="test only this feature (repeatable)"
        )
        sub.add_argument("--strict", action="store_true", help="fail instead of falling back to a pseudo-inverse")
        _add_level(sub, level_help)
        _add_imputer_options(sub)
        _add_model_options(sub)

    simulate = add("simulate", "replicated runs on a synthetic setting")
    _add_setting_options(simulate)
    simulate.add_argument("--reps", type=_positive_int, help="number of replicates")
    simulate.add_argument("--method", help="knockoff_threshold, bh_on_wilcoxon, wilcoxon or sign_test")
    simulate.add_argument("--loss", choices=("auto", "squared_error", "cross_entropy"))
    simulate.add_argument("--oracle", action="store_true", help="use the exact Gaussian conditional means")
    _add_level(simulate, "default 0.2")
    _add_imputer_options(simulate)
    _add_model_options(simulate)

    stability = add("stability", "stability and Wasserstein rate probes over sample sizes")
    _add_setting_options(stability, with_n=False)
    stability.add_argument("--n", dest="sizes", type=_size_list, help="comma-separated sample sizes")
    stability.add_argument("--seeds", type=_positive_int, help="seeds per sample size")
    stability.add_argument("--probe", choices=("coefficients", "wasserstein"))
    stability.add_argument("--lambda", dest="lambda", type=_lambda, help="imputer ridge penalty")
    _add_model_options(stability)

    dr_check = add("dr-check", "double-robustness diagnostic on a null feature")
    _add_setting_options(dr_check)
    dr_check.add_argument("--nu", choices=("ridge", "oracle"), help="imputer used for the nu side")
    dr_check.add_argument("--lambda", dest="lambda", type=_lambda, help="imputer ridge penalty")
    _add_model_options(dr_check)

    inject = add("inject-null", "append a correlated null column to a dataset")
    inject.add_argument("--data", help="CSV file with a header row")
    inject.add_argument("--target", help="name of the response column")
    inject.add_argument("--corr", type=float, help="target correlation of the injected column (default 0.6)")

    snapshot = add("snapshot", "per-feature statistics and threshold of one synthetic dataset")
    _add_setting_options(snapshot)
    _add_level(snapshot, "default 0.2")
    _add_imputer_options(snapshot)
    _add_model_options(snapshot)
    return parser


# ---- shared helpers ----------------------------------------------------------


def _require(config: CliConfig, *names: str) -> None:
    for name in names:
        if getattr(config, name) is None:
            flag = {"data_path": "--data", "target_column": "--target"}.get(name, f"--{name}")
            raise ConfigurationError(f"'{config.subcommand}' needs {flag}")


def _model_spec(config: CliConfig) -> ModelSpec:
    options = {
        "rounds": config.rounds,
        "learning_rate": config.learning_rate,
        "ridge_lambda": config.ridge_lambda,
        "request_timeout": config.timeout,
    }
    return ModelSpec.parse(config.model_spec, **{k: v for k, v in options.items() if v is not None})


def _loss(config: CliConfig, data: TabularDataset) -> LossFunction:
    if config.loss in (None, "auto"):
        return default_loss(data.task_kind)
    return LossFunction.from_name(config.loss)


def _setting(config: CliConfig, n: Optional[int] = None) -> SyntheticSetting:
    options = {"correlation_rho": config.correlation, "noise_sd": config.noise_sd, "sparsity": config.sparsity}
    return SyntheticSetting(
        SettingKind.parse(config.setting),
        n if n is not None else config.n,
        config.p,
        **{k: v for k, v in options.items() if v is not None},
    )


def _output(config: CliConfig) -> Path:
    return Path(config.output_path if config.output_path is not None else config.default_output())


def _write(config: CliConfig, payload: Mapping[str, Any], frame_of: Callable[[], Any], rows_key: str) -> Path:
    """Write *payload* as JSON, or as CSV plus a JSON sidecar without *rows_key*."""
    path = _output(config)
    if config.output_format == "csv":
        save_csv(path, frame_of())
        save_json(path.with_suffix(".json"), {k: v for k, v in payload.items() if k != rows_key})
    else:
        save_json(path, payload)
    return path


def _summary(template: str, **context) -> None:
    print(TemplateRenderer().render_template(template, **context), end="")


def _finite(value) -> Optional[float]:
    return float(value) if value is not None and math.isfinite(value) else None


def _root(config: CliConfig) -> RngStream:
    return RngStream(config.seed)


# ---- subcommands -------------------------------------------------------------


def _run_selection(config: CliConfig) -> int:
    _require(config, "data_path", "target_column")
    started = time.perf_counter()
    data = load_dataset(config.data_path, config.target_column)
    rng = _root(config)
    with _model_spec(config).session(data, derive_stream(rng, _MODEL_STREAM)) as model:
        report = run_semi_knockoffs(
            data,
            model,
            _loss(config, data),
            config.lam,
            config.level,
            config.permutations,
            config.method_enum,
            derive_stream(rng, _DRAW_STREAM),
            workers=config.workers,
            features=config.features,
            strict=bool(config.strict),
        )
    payload = build_selection_report(report, config.embedded())
    ensure_valid(payload, "selection_report", "selection report")
    path = _write(config, payload, lambda: selection_frame(report), "features")
    _summary(
        "selection_summary.txt.jinja2",
        **payload,
        output=str(path),
        runtime=time.perf_counter() - started,
    )
    return 0


def cmd_select(config: CliConfig) -> int:
    """Knockoff-threshold or BH selection on a CSV dataset."""
    return _run_selection(config)


def cmd_test(config: CliConfig) -> int:
    """Per-feature p-values (Wilcoxon or sign test) on a CSV dataset."""
    return _run_selection(config)


def cmd_simulate(config: CliConfig) -> int:
    setting = _setting(config)
    method_config = MethodConfig(
        method=config.method_enum,
        level=config.level,
        model=_model_spec(config),
        lam=config.lam,
        permutations=config.permutations,
        oracle=bool(config.oracle),
        loss=None if config.loss in (None, "auto") else LossFunction.from_name(config.loss),
    )
    report = run_replicated(setting, method_config, config.reps, _root(config), workers=config.workers)
    payload = build_experiment_report(report, config.embedded())
    path = _write(config, payload, lambda: experiment_frame(report), "replicates")
    _summary(
        "experiment_summary.txt.jinja2",
        kind=f"simulate {setting.kind.value}",
        headline=f"{report.replicate_count} replicate(s) of {method_config.method.value} in {report.runtime:.2f}s",
        entries=list(report.aggregates().items()),
        output=str(path),
    )
    return 0


def _rate_rows(points, value_names: Sequence[str]) -> List[Dict[str, Any]]:
    rows = []
    for point in points:
        columns = [point.null_values] + ([point.important_values] if len(value_names) > 1 else [])
        for seed_index, values in enumerate(zip(*columns)):
            row: Dict[str, Any] = {"n": point.n, "seed": seed_index}
            row.update({name: float(v) for name, v in zip(value_names, values)})
            rows.append(row)
    return rows


def cmd_stability(config: CliConfig) -> int:
    """Coefficient-stability or Wasserstein medians across sample sizes."""
    sizes = list(config.sizes)
    setting = _setting(config, n=sizes[0])
    rng = _root(config)
    started = time.perf_counter()
    if config.probe == "wasserstein":
        points = wasserstein_rate(
            setting, sizes, config.seeds, _model_spec(config), config.fixed_lambda, rng, workers=config.workers
        )
        kind, names = "wasserstein_rate", ("wasserstein",)
        medians = [{"n": pt.n, "median": pt.null_median} for pt in points]
    else:
        points = stability_curve(setting, sizes, config.seeds, config.fixed_lambda, rng, workers=config.workers)
        kind, names = "stability_curve", ("null", "important")
        medians = [{"n": pt.n, "null_median": pt.null_median, "important_median": pt.important_median} for pt in points]
    rows = _rate_rows(points, names)
    payload = build_probe(kind, config.seed, rows, config.embedded(), summary={"medians": medians})
    path = _write(config, payload, lambda: rows_frame(rows, ("n", "seed") + names), "rows")
    entries = [
        (f"n={m['n']} {name}", value) for m in medians for name, value in m.items() if name != "n"
    ]
    _summary(
        "experiment_summary.txt.jinja2",
        kind=kind,
        headline=f"{len(sizes)} sample size(s) x {config.seeds} seed(s) in {time.perf_counter() - started:.2f}s",
        entries=entries,
        output=str(path),
    )
    return 0


def cmd_dr_check(config: CliConfig) -> int:
    """Loss differences of the estimated and oracle nu populations for one null feature."""
    setting = _setting(config)
    probe = double_robustness_probe(setting, _model_spec(config), config.fixed_lambda, _root(config), nu_kind=config.nu)
    blue, orange = probe.estimated_vs_estimated, probe.estimated_vs_oracle
    rows = [
        {"sample": i, "estimated_vs_estimated": float(b), "estimated_vs_oracle": float(o)}
        for i, (b, o) in enumerate(zip(blue, orange))
    ]
    summary = {
        "feature_index": probe.feature_index,
        "mean_estimated_vs_estimated": float(np.mean(blue)),
        "sd_estimated_vs_estimated": float(np.std(blue, ddof=1)),
        "mean_estimated_vs_oracle": float(np.mean(orange)),
        "sd_estimated_vs_oracle": float(np.std(orange, ddof=1)),
    }
    payload = build_probe("double_robustness", config.seed, rows, config.embedded(), summary=summary)
    path = _write(
        config, payload, lambda: rows_frame(rows, ("sample", "estimated_vs_estimated", "estimated_vs_oracle")), "rows"
    )
    _summary(
        "experiment_summary.txt.jinja2",
        kind="dr-check",
        headline=f"feature {probe.feature_index}, n={setting.n}, nu={config.nu}",
        entries=[(k, v) for k, v in summary.items() if k != "feature_index"],
        output=str(path),
    )
    return 0


def cmd_inject_null(config: CliConfig) -> int:
    """Write the dataset with one extra null column and a sidecar naming it."""
    _require(config, "data_path", "target_column")
    data = load_dataset(config.data_path, config.target_column)
    augmented, index = inject_correlated_null(data, config.corr, _root(config))
    name = augmented.feature_name(index)
    achieved = float(np.corrcoef(augmented.inputs[:, index], data.inputs.mean(axis=1))[0, 1])

    path = Path(config.output_path or f"{Path(config.data_path).stem}_injected.csv")
    save_csv(path, dataset_frame(augmented, config.target_column))
    summary = {"injected_index": index, "injected_name": name, "target_correlation": config.corr, "data": str(path)}
    save_json(path.with_suffix(".json"), build_probe("null_injection", config.seed, [], config.embedded(), summary))
    _summary(
        "experiment_summary.txt.jinja2",
        kind="inject-null",
        headline=f"column '{name}' at index {index}",
        entries=[("target correlation", config.corr), ("correlation with input mean", achieved)],
        output=str(path),
    )
    return 0


def cmd_snapshot(config: CliConfig) -> int:
    """Plot-ready statistics, null labels and threshold of one synthetic dataset."""
    setting = _setting(config)
    snapshot = exchangeability_snapshot(
        setting, _model_spec(config), config.lam, config.level, _root(config), permutations=config.permutations
    )
    threshold = snapshot[0].threshold if snapshot else None
    rows = [
        {"feature_index": r.feature_index, "statistic": float(r.statistic), "is_null": r.is_null}
        for r in snapshot
    ]
    summary = {"threshold": _finite(threshold), "no_threshold": threshold is not None and math.isinf(threshold)}
    payload = build_probe("exchangeability_snapshot", config.seed, rows, config.embedded(), summary=summary)
    path = _write(config, payload, lambda: rows_frame(rows, ("feature_index", "statistic", "is_null")), "rows")
    _summary(
        "experiment_summary.txt.jinja2",
        kind="snapshot",
        headline=f"{setting.kind.value}, n={setting.n}, p={setting.p}",
        entries=[("threshold", threshold), ("null features", sum(r.is_null for r in snapshot))],
        output=str(path),
    )
    return 0


COMMANDS: Dict[str, Callable[[CliConfig], int]] = {
    "select": cmd_select,
    "test": cmd_test,
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "dr-check": cmd_dr_check,
    "inject-null": cmd_inject_null,
    "snapshot": cmd_snapshot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the semi-knockoffs console script."""
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop("subcommand")
    config_file = args.pop("config_file", None)
    verbose = args.pop("verbose", False)
    quiet = args.pop("quiet", False)

    try:
        settings = RunSettings.from_env()
        if verbose:
            settings.log_level = "DEBUG"
        elif quiet:
            settings.log_level = "WARNING"
        settings.set_logging()
        config = resolve_config(subcommand, args, config_file, settings)
        return COMMANDS[subcommand](config)
    except SemiKnockoffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        logger.info("interrupted")
        return 130
