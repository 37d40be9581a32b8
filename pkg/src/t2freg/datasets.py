"""Bundled sample series for demos and end-to-end tests."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def _data_path(name: str) -> Path:
    return Path(str(resources.files("t2freg").joinpath("data", name)))


def sample_series_path() -> Path:
    """A stock-index-flavoured random walk, 80 business days."""
    return _data_path("sample_series.csv")


def synthetic_noiseless_path() -> Path:
    """A decreasing geometric series: lag-1 windows fuzzify into an exact
    linear model with a zero intercept, so a correct fit forecasts it with
    vanishing error."""
    return _data_path("synthetic_noiseless.csv")
