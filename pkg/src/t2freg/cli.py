"""Command-line front end.

Subcommands: ``fuzzify`` (series to dataset JSON), ``fit`` (series to fitted
coefficients), ``predict`` (coefficients + series to forecast CSV), ``eval``
(full experiment: report, forecast CSV, coefficients, optional SVG chart),
and ``compare`` (table over report JSONs).

Configuration comes from a single JSON file (see README for the schema) plus
flag overrides ``--h``, ``--mode``, ``--seed``, ``--out-dir``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 infeasible fit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import evaluate, regression
from .evaluate import ConfigError, ExperimentConfig, ForecastReport, atomic_write
from .pipeline import DataError, build_dataset, load_csv, split
from .regression import CoefficientSet, InfeasibleFitError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INFEASIBLE = 4


def _load_config(path: Optional[str], args: argparse.Namespace) -> ExperimentConfig:
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                raw = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        raw = dict(raw)
    if getattr(args, "split", None) is not None:
        raw["split_date"] = args.split
    raw.setdefault("split_date", "9999-12-31")  # effectively "train on all"
    if args.h is not None:
        raw["h"] = args.h
    if args.mode is not None:
        raw["objective_mode"] = args.mode
    if args.seed is not None:
        solver = dict(raw.get("solver", {}))
        solver["seed"] = args.seed
        raw["solver"] = solver
    return ExperimentConfig.from_dict(raw)


def _fit_dataset(dataset, config: ExperimentConfig) -> CoefficientSet:
    return regression.fit_tt2fr(dataset, config.fit)


def _cmd_fuzzify(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args)
    series = load_csv(args.series)
    dataset = build_dataset(series, config.fuzzifier)
    out = Path(args.out_dir) / "dataset.json"
    atomic_write(out, dataset.to_json())
    print(f"wrote {out} ({len(dataset)} rows)")
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args)
    series = load_csv(args.series)
    dataset = build_dataset(series, config.fuzzifier)
    if args.split is not None:
        dataset, _ = split(dataset, args.split)
    coeffs = _fit_dataset(dataset.dataset, config)
    out = Path(args.out_dir) / "coefficients.json"
    atomic_write(out, json.dumps(coeffs.to_dict(), sort_keys=True, indent=2) + "\n")
    print(f"wrote {out} (h={config.fit.h}, mode={config.fit.objective_mode})")
    return EXIT_OK


def _cmd_predict(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args)
    try:
        with open(args.coeffs, "r", encoding="utf-8") as handle:
            coeffs = CoefficientSet.from_dict(json.load(handle))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot load coefficients {args.coeffs!r}: {exc}") from exc
    series = load_csv(args.series)
    dataset = build_dataset(series, config.fuzzifier)
    points, _ = evaluate.score(dataset, coeffs, config.fit.h, config.defuzzifier, "test")
    report = ForecastReport(config.label, config.fit.h, 0.0, 0.0, tuple(points))
    out = Path(args.out_dir) / "forecast.csv"
    atomic_write(out, evaluate.forecast_csv(report))
    print(f"wrote {out} ({len(points)} rows)")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args)
    out_dir = Path(args.out_dir)
    report = evaluate.run_experiment(args.series, config, out_dir, write_chart=args.svg)
    if args.baseline:
        series = load_csv(args.series)
        dataset = build_dataset(series, config.fuzzifier)
        train, test = split(dataset, config.split_date)
        baseline = evaluate.least_squares_baseline(train, test)
        atomic_write(out_dir / "baseline_report.json", baseline.to_json())
    print(
        f"{report.label}: train_rmse={report.train_rmse:.6f} "
        f"test_rmse={report.test_rmse:.6f} (h={report.h})"
    )
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    reports = []
    for path in args.reports:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                reports.append(ForecastReport.from_dict(json.load(handle)))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DataError(f"cannot load report {path!r}: {exc}") from exc
    table, rows = evaluate.compare(reports)
    out_dir = Path(args.out_dir)
    atomic_write(out_dir / "comparison.txt", table)
    atomic_write(
        out_dir / "comparison.json",
        json.dumps({"schema_version": 1, "rows": rows}, sort_keys=True, indent=2) + "\n",
    )
    print(table, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="t2freg",
        description="Triangular type-2 fuzzy regression forecasting toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, series: bool = True) -> None:
        if series:
            p.add_argument("--series", required=True, help="two-column CSV (ISO date, value)")
        p.add_argument("--config", help="JSON config file (see README)")
        p.add_argument("--out-dir", default=".", help="directory for artifacts")
        p.add_argument("--h", type=float, help="override the cut level in [0, 1)")
        p.add_argument(
            "--mode",
            choices=(regression.PAPER_LITERAL, regression.TEXT_CONSISTENT),
            help="objective sign convention",
        )
        p.add_argument("--seed", type=int, help="override the solver seed")

    p = sub.add_parser("fuzzify", help="fuzzify a series into dataset JSON")
    common(p)
    p.set_defaults(func=_cmd_fuzzify)

    p = sub.add_parser("fit", help="fit coefficients to a series")
    common(p)
    p.add_argument("--split", help="fit only on rows strictly before this date")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("predict", help="forecast a series with fitted coefficients")
    common(p)
    p.add_argument("--coeffs", required=True, help="coefficients JSON from `fit`")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="full experiment: fit, forecast, score")
    common(p)
    p.add_argument("--split", help="override the config split date")
    p.add_argument("--baseline", action="store_true", help="also score a least-squares baseline")
    p.add_argument("--svg", action="store_true", help="emit chart.svg")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("compare", help="tabulate report JSONs by test RMSE")
    p.add_argument("reports", nargs="+", help="report.json files")
    p.add_argument("--out-dir", default=".", help="directory for artifacts")
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InfeasibleFitError as exc:
        print(f"infeasible fit: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
