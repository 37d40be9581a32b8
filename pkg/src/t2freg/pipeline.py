"""Univariate time series to fuzzy regression data.

A crisp positive series is read from two-column CSV (ISO date, value), each
point's recent window is fuzzified into a triangular type-2 number from its
low / main / high values, and lagged crisp values (plus an optional intercept
column) become the regressors. The fuzzification rule is a configurable
convention, not a canonical construction: the window minimum and maximum give
the outer supports, the main value gives the peak, and ``inner_shrink`` pulls
the inner supports toward the peak.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .numbers import It2TriFou, Tt2Number
from .regression import RegressionDataset


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class SeriesPoint:
    """One observation: ISO calendar date and a strictly positive value."""

    date: str
    value: float

    def __post_init__(self) -> None:
        try:
            datetime.date.fromisoformat(self.date)
        except ValueError as exc:
            raise DataError(f"invalid ISO date {self.date!r}") from exc
        if not self.value > 0.0:
            raise DataError(f"series value must be positive, got {self.value}")


@dataclass(frozen=True)
class FuzzifierConfig:
    """Window fuzzification and lag layout.

    ``main_rule`` picks the peak of each window (``"last"`` or ``"mean"``);
    ``inner_shrink`` in ``(0, 1]`` sets how far the inner supports sit between
    the peak and the window extremes (1 collapses the footprint onto its
    upper membership).
    """

    window_len: int = 5
    main_rule: str = "last"
    inner_shrink: float = 0.5
    lag_count: int = 1
    intercept: bool = True

    def __post_init__(self) -> None:
        if self.window_len < 2:
            raise ValueError(f"window_len must be >= 2, got {self.window_len}")
        if self.main_rule not in ("last", "mean"):
            raise ValueError(f"main_rule must be 'last' or 'mean', got {self.main_rule!r}")
        if not 0.0 < self.inner_shrink <= 1.0:
            raise ValueError(f"inner_shrink must lie in (0, 1], got {self.inner_shrink}")
        if self.lag_count < 1:
            raise ValueError(f"lag_count must be >= 1, got {self.lag_count}")


@dataclass(frozen=True)
class ForecastDataset:
    """Dated regression rows with the raw value as crisp target."""

    dates: tuple[str, ...]
    dataset: RegressionDataset
    targets: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.targets, dtype=float)
        if t.shape != (len(self.dates),) or len(self.dates) != self.dataset.n_observations:
            raise ValueError("dates, dataset rows, and targets must align")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "targets", t)
        object.__setattr__(self, "dates", tuple(self.dates))

    def __len__(self) -> int:
        return len(self.dates)

    def to_dict(self) -> dict:
        rows = []
        for i, date in enumerate(self.dates):
            fou = self.dataset.outputs[i].fou
            rows.append(
                {
                    "date": date,
                    "inputs": [float(v) for v in self.dataset.inputs[i]],
                    "output_fou": [float(v) for v in fou.as_tuple()],
                    "target": float(self.targets[i]),
                }
            )
        return {"schema_version": 1, "rows": rows}

    @classmethod
    def from_dict(cls, data: dict) -> "ForecastDataset":
        rows = data["rows"]
        dates = tuple(r["date"] for r in rows)
        inputs = np.asarray([r["inputs"] for r in rows], dtype=float)
        outputs = tuple(Tt2Number(It2TriFou(*r["output_fou"])) for r in rows)
        targets = np.asarray([r["target"] for r in rows], dtype=float)
        return cls(dates, RegressionDataset(inputs, outputs), targets)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def load_csv(source: Union[str, "io.TextIOBase"]) -> list[SeriesPoint]:
    """Read a two-column CSV (ISO-8601 date, decimal value).

    A header row is tolerated: the first line is skipped when its date field
    does not parse as a date. Values must be positive and dates strictly
    increasing; violations are reported with their line number.
    """
    if hasattr(source, "read"):
        return _parse_csv(source)
    try:
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return _parse_csv(handle)
    except OSError as exc:
        raise DataError(f"cannot read series {source!r}: {exc}") from exc


def _parse_csv(handle) -> list[SeriesPoint]:
    points: list[SeriesPoint] = []
    prev_date = ""
    for lineno, row in enumerate(csv.reader(handle), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise DataError(f"line {lineno}: expected 'date,value', got {row!r}")
        date_text, value_text = row[0].strip(), row[1].strip()
        try:
            datetime.date.fromisoformat(date_text)
        except ValueError:
            if lineno == 1:
                continue  # header row
            raise DataError(f"line {lineno}: invalid date {date_text!r}") from None
        try:
            value = float(value_text)
        except ValueError:
            raise DataError(f"line {lineno}: invalid value {value_text!r}") from None
        if value <= 0.0:
            raise DataError(f"line {lineno}: value must be positive, got {value}")
        if date_text <= prev_date:
            raise DataError(
                f"line {lineno}: dates must be strictly increasing "
                f"({date_text!r} after {prev_date!r})"
            )
        prev_date = date_text
        points.append(SeriesPoint(date_text, value))
    if not points:
        raise DataError("no data rows in CSV")
    return points


def fuzzify_window(window: Sequence[float], cfg: FuzzifierConfig) -> Tt2Number:
    """Triangular type-2 number for one window of crisp values.

    Outer supports are the window minimum and maximum, the peak is the main
    value (`last` or `mean` of the window), and the inner supports sit at
    ``inner_shrink`` of the distance from the peak to each extreme. A constant
    window yields a crisp number.
    """
    if len(window) != cfg.window_len:
        raise DataError(f"window length {len(window)} != configured {cfg.window_len}")
    values = [float(v) for v in window]
    low, high = min(values), max(values)
    main = values[-1] if cfg.main_rule == "last" else sum(values) / len(values)
    theta = cfg.inner_shrink
    fou = It2TriFou(
        low,
        main - theta * (main - low),
        main,
        main + theta * (high - main),
        high,
    )
    return Tt2Number(fou, apex_fraction=0.5)


def build_dataset(series: Sequence[SeriesPoint], cfg: FuzzifierConfig) -> ForecastDataset:
    """Lagged regression rows over a series.

    Row ``t`` has inputs ``(1, value[t-1], ..., value[t-lag_count])`` (the
    intercept column first, when enabled), the fuzzified window ending at
    ``t`` as output, and the raw ``value[t]`` as crisp RMSE target. Rows start
    once every lagged input has a complete window behind it, i.e. at index
    ``window_len - 1 + lag_count``.
    """
    values = [p.value for p in series]
    start = cfg.window_len - 1 + cfg.lag_count
    if start >= len(series):
        raise DataError(
            f"series of {len(series)} points is too short for window "
            f"{cfg.window_len} plus {cfg.lag_count} lag(s)"
        )
    dates = []
    inputs = []
    outputs = []
    targets = []
    for t in range(start, len(series)):
        lags = [values[t - k] for k in range(1, cfg.lag_count + 1)]
        row = ([1.0] + lags) if cfg.intercept else lags
        window = values[t - cfg.window_len + 1 : t + 1]
        dates.append(series[t].date)
        inputs.append(row)
        outputs.append(fuzzify_window(window, cfg))
        targets.append(values[t])
    return ForecastDataset(
        tuple(dates),
        RegressionDataset(np.asarray(inputs, dtype=float), tuple(outputs)),
        np.asarray(targets, dtype=float),
    )


def split(ds: ForecastDataset, boundary_date: str) -> tuple[ForecastDataset, ForecastDataset]:
    """Partition rows at a boundary date: strictly earlier rows train, the
    rest test. Either side being empty is an error."""
    try:
        datetime.date.fromisoformat(boundary_date)
    except ValueError as exc:
        raise DataError(f"invalid boundary date {boundary_date!r}") from exc
    train_idx = [i for i, d in enumerate(ds.dates) if d < boundary_date]
    test_idx = [i for i, d in enumerate(ds.dates) if d >= boundary_date]
    if not train_idx:
        raise DataError(f"no rows before boundary {boundary_date}")
    if not test_idx:
        raise DataError(f"no rows on or after boundary {boundary_date}")
    return _take(ds, train_idx), _take(ds, test_idx)


def _take(ds: ForecastDataset, idx: list[int]) -> ForecastDataset:
    return ForecastDataset(
        tuple(ds.dates[i] for i in idx),
        RegressionDataset(
            ds.dataset.inputs[idx], tuple(ds.dataset.outputs[i] for i in idx)
        ),
        ds.targets[idx],
    )
