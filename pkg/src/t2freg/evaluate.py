"""Forecast scoring, experiment orchestration, and comparison tables.

``run_experiment`` wires the full pipeline: load CSV, fuzzify, split at a
boundary date, fit the triangular type-2 regression on the training rows,
defuzzify predictions for every row, and score train/test RMSE against the
raw series values. Artifacts (report JSON with stable key order, a forecast
CSV with the predicted footprint bounds, the fitted coefficients, and an
optional SVG chart) are written atomically.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import regression
from .pipeline import ForecastDataset, FuzzifierConfig, SeriesPoint, build_dataset, load_csv, split
from .qp import SolverConfig
from .regression import CoefficientSet, FitConfig, defuzzify, predict, predicted_reduction

SCHEMA_VERSION = 1

FORECAST_CSV_HEADER = "date,actual,forecast,a_low,a_up,c_low,c_up"


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def rmse(actual: Sequence[float], forecast: Sequence[float]) -> float:
    """Root mean square error between two equal-length crisp vectors."""
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    if a.shape != f.shape or a.ndim != 1:
        raise ValueError(f"shape mismatch: {a.shape} vs {f.shape}")
    if a.size == 0:
        raise ValueError("rmse of empty vectors")
    return float(math.sqrt(np.mean((a - f) ** 2)))


@dataclass(frozen=True)
class ForecastPoint:
    date: str
    actual: float
    forecast: float
    fou: tuple[float, float, float, float, float]
    reduced: tuple[float, float, float, float, float]
    subset: str  # "train" | "test"


@dataclass(frozen=True)
class ForecastReport:
    label: str
    h: float
    train_rmse: float
    test_rmse: float
    points: tuple[ForecastPoint, ...]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "label": self.label,
            "h": self.h,
            "train_rmse": self.train_rmse,
            "test_rmse": self.test_rmse,
            "points": [dataclasses.asdict(p) for p in self.points],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ForecastReport":
        points = tuple(
            ForecastPoint(
                p["date"],
                float(p["actual"]),
                float(p["forecast"]),
                tuple(p["fou"]),
                tuple(p["reduced"]),
                p["subset"],
            )
            for p in data["points"]
        )
        return cls(
            data["label"], float(data["h"]), float(data["train_rmse"]),
            float(data["test_rmse"]), points,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run needs besides the series itself."""

    split_date: str
    fuzzifier: FuzzifierConfig = field(default_factory=FuzzifierConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    defuzzifier: str = "peak"
    label: str = "tt2fr"

    def __post_init__(self) -> None:
        if self.defuzzifier not in ("peak", "centroid"):
            raise ConfigError(f"defuzzifier must be 'peak' or 'centroid', got {self.defuzzifier!r}")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        """Build from the documented JSON config schema (strict keys)."""
        known = {
            "schema_version", "split_date", "label", "defuzzifier",
            "window_len", "main_rule", "inner_shrink", "lag_count", "intercept",
            "h", "term_weights", "objective_mode", "necessity_rhs_minus",
            "solver",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        version = raw.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version}")
        if "split_date" not in raw:
            raise ConfigError("config requires 'split_date'")
        solver_raw = raw.get("solver", {})
        if not isinstance(solver_raw, dict):
            raise ConfigError("'solver' must be an object")
        try:
            solver = SolverConfig(**solver_raw)
            fuzz = FuzzifierConfig(
                window_len=int(raw.get("window_len", 5)),
                main_rule=raw.get("main_rule", "last"),
                inner_shrink=float(raw.get("inner_shrink", 0.5)),
                lag_count=int(raw.get("lag_count", 1)),
                intercept=bool(raw.get("intercept", True)),
            )
            fit = FitConfig(
                h=float(raw.get("h", 0.4)),
                term_weights=tuple(float(w) for w in raw.get("term_weights", (1, 1, 1, 1))),
                objective_mode=raw.get("objective_mode", regression.TEXT_CONSISTENT),
                necessity_rhs_minus=bool(raw.get("necessity_rhs_minus", False)),
                solver=solver,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc
        return cls(
            split_date=str(raw["split_date"]),
            fuzzifier=fuzz,
            fit=fit,
            defuzzifier=raw.get("defuzzifier", "peak"),
            label=str(raw.get("label", "tt2fr")),
        )


def atomic_write(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def score(
    part: ForecastDataset,
    coeffs: CoefficientSet,
    h: float,
    defuzzifier: str,
    subset: str,
) -> tuple[list[ForecastPoint], float]:
    points = []
    forecasts = []
    for i, date in enumerate(part.dates):
        fou = predict(coeffs, part.dataset.inputs[i])
        crisp = defuzzify(fou, defuzzifier)
        reduced = predicted_reduction(fou, h)
        forecasts.append(crisp)
        points.append(
            ForecastPoint(
                date=date,
                actual=float(part.targets[i]),
                forecast=float(crisp),
                fou=tuple(float(v) for v in fou.as_tuple()),
                reduced=(
                    float(reduced.x2h), float(reduced.x1h), float(reduced.peak),
                    float(reduced.x3h), float(reduced.x4h),
                ),
                subset=subset,
            )
        )
    return points, rmse(part.targets, forecasts)


def run_experiment(
    series: Union[str, Path, Sequence[SeriesPoint]],
    config: ExperimentConfig,
    out_dir: Optional[Union[str, Path]] = None,
    write_chart: bool = False,
) -> ForecastReport:
    """Load, fuzzify, split, fit, forecast, and score one series.

    When ``out_dir`` is given, writes ``report.json``, ``forecast.csv``
    (``date,actual,forecast,a_low,a_up,c_low,c_up``), ``coefficients.json``,
    and optionally ``chart.svg``. All writes are atomic and the outputs are
    byte-identical across runs for the same inputs.
    """
    if isinstance(series, (str, Path)):
        series = load_csv(str(series))
    dataset = build_dataset(series, config.fuzzifier)
    train, test = split(dataset, config.split_date)
    coeffs = regression.fit_tt2fr(train.dataset, config.fit)

    train_points, train_rmse = score(train, coeffs, config.fit.h, config.defuzzifier, "train")
    test_points, test_rmse = score(test, coeffs, config.fit.h, config.defuzzifier, "test")
    report = ForecastReport(
        label=config.label,
        h=config.fit.h,
        train_rmse=train_rmse,
        test_rmse=test_rmse,
        points=tuple(train_points + test_points),
    )
    if out_dir is not None:
        write_artifacts(report, coeffs, Path(out_dir), write_chart=write_chart)
    return report


def write_artifacts(
    report: ForecastReport,
    coeffs: Optional[CoefficientSet],
    out_dir: Path,
    write_chart: bool = False,
    stem: str = "",
) -> None:
    prefix = f"{stem}_" if stem else ""
    atomic_write(out_dir / f"{prefix}report.json", report.to_json())
    atomic_write(out_dir / f"{prefix}forecast.csv", forecast_csv(report))
    if coeffs is not None:
        atomic_write(
            out_dir / f"{prefix}coefficients.json",
            json.dumps(coeffs.to_dict(), sort_keys=True, indent=2) + "\n",
        )
    if write_chart:
        atomic_write(out_dir / f"{prefix}chart.svg", chart_svg(report))


def forecast_csv(report: ForecastReport) -> str:
    """One row per evaluated date: actuals, crisp forecast, and the outer and
    inner footprint bounds."""
    lines = [FORECAST_CSV_HEADER]
    for p in report.points:
        a_low, a_up, _, c_low, c_up = p.fou
        lines.append(
            f"{p.date},{p.actual!r},{p.forecast!r},{a_low!r},{a_up!r},{c_low!r},{c_up!r}"
        )
    return "\n".join(lines) + "\n"


def least_squares_baseline(
    train: ForecastDataset, test: ForecastDataset, label: str = "classic_least_squares"
) -> ForecastReport:
    """Ordinary least squares on (inputs -> crisp target), reported in the
    same shape so it can sit in the comparison table."""
    beta, *_ = np.linalg.lstsq(train.dataset.inputs, train.targets, rcond=None)
    points = []
    rmses = {}
    for subset, part in (("train", train), ("test", test)):
        forecasts = part.dataset.inputs @ beta
        rmses[subset] = rmse(part.targets, forecasts)
        for i, date in enumerate(part.dates):
            f = float(forecasts[i])
            crisp = (f, f, f, f, f)
            points.append(ForecastPoint(date, float(part.targets[i]), f, crisp, crisp, subset))
    return ForecastReport(label, 0.0, rmses["train"], rmses["test"], tuple(points))


def compare(reports: Sequence[ForecastReport]) -> tuple[str, list[dict]]:
    """Comparison table over reports, ascending by test RMSE.

    Returns the rendered text table and a JSON-ready list of rows.
    """
    if not reports:
        raise ValueError("compare needs at least one report")
    ordered = sorted(reports, key=lambda r: (r.test_rmse, r.label))
    rows = [
        {"label": r.label, "h": r.h, "train_rmse": r.train_rmse, "test_rmse": r.test_rmse}
        for r in ordered
    ]
    width = max(len("model"), *(len(r.label) for r in ordered))
    lines = [
        f"{'model':<{width}}  {'train_rmse':>12}  {'test_rmse':>12}",
        f"{'-' * width}  {'-' * 12}  {'-' * 12}",
    ]
    for r in ordered:
        lines.append(f"{r.label:<{width}}  {r.train_rmse:>12.6f}  {r.test_rmse:>12.6f}")
    return "\n".join(lines) + "\n", rows


def chart_svg(report: ForecastReport, width: int = 900, height: int = 360) -> str:
    """Minimal deterministic SVG: actual and forecast lines over the outer
    footprint band, in date order."""
    pts = report.points
    n = len(pts)
    lows = [p.fou[0] for p in pts]
    highs = [p.fou[4] for p in pts]
    vals = [p.actual for p in pts] + [p.forecast for p in pts] + lows + highs
    vmin, vmax = min(vals), max(vals)
    span = (vmax - vmin) or 1.0
    pad = 40.0

    def sx(i: int) -> float:
        return pad + (width - 2 * pad) * (i / max(n - 1, 1))

    def sy(v: float) -> float:
        return height - pad - (height - 2 * pad) * ((v - vmin) / span)

    def path(values: list[float]) -> str:
        return " ".join(f"{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(values))

    band = path(highs) + " " + " ".join(
        f"{sx(i):.2f},{sy(v):.2f}" for i, v in zip(range(n - 1, -1, -1), reversed(lows))
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<polygon points="{band}" fill="#c8d8f0" stroke="none"/>\n'
        f'<polyline points="{path([p.actual for p in pts])}" fill="none" '
        f'stroke="#202020" stroke-width="1.5"/>\n'
        f'<polyline points="{path([p.forecast for p in pts])}" fill="none" '
        f'stroke="#c03020" stroke-width="1.5" stroke-dasharray="4,3"/>\n'
        f'<text x="{pad}" y="20" font-family="monospace" font-size="12">'
        f"{report.label}: train_rmse={report.train_rmse:.4f} test_rmse={report.test_rmse:.4f}"
        f"</text>\n</svg>\n"
    )
