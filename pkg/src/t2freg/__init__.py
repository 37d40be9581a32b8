"""Possibilistic linear regression with triangular type-2 fuzzy outputs.

Crisp inputs are regressed onto fuzzy observations: each observation is a
triangular type-2 number, reduced at a chosen level into an interval type-2
footprint, and the fuzzy coefficients are found by a dense quadratic program
under level-wise inclusion constraints. A small forecasting harness fuzzifies
univariate time series, fits, predicts, and scores by RMSE.
"""

from .numbers import It2TriFou, TriT1Number, Tt2Number, add, linear_combination, scale
from .hcut import DegenerateSideError, ReducedFou, SecondarySlice, left_slice, reduce, reduce_left, reduce_right, right_slice
from .qp import QpProblem, QpSolution, SolverConfig, brute_force_oracle, classify, solve
from .regression import (
    CoefficientSet,
    FitConfig,
    InfeasibleFitError,
    RegressionDataset,
    UnboundedFitError,
    build_constraints,
    build_objective,
    defuzzify,
    fit_it2fr,
    fit_tt2fr,
    predict,
    predicted_reduction,
)
from .pipeline import FuzzifierConfig, SeriesPoint, build_dataset, fuzzify_window, load_csv, split
from .evaluate import ForecastReport, compare, least_squares_baseline, rmse, run_experiment

__version__ = "0.1.0"

__all__ = [
    "It2TriFou",
    "TriT1Number",
    "Tt2Number",
    "add",
    "linear_combination",
    "scale",
    "DegenerateSideError",
    "ReducedFou",
    "SecondarySlice",
    "left_slice",
    "right_slice",
    "reduce",
    "reduce_left",
    "reduce_right",
    "QpProblem",
    "QpSolution",
    "SolverConfig",
    "brute_force_oracle",
    "classify",
    "solve",
    "CoefficientSet",
    "FitConfig",
    "InfeasibleFitError",
    "UnboundedFitError",
    "RegressionDataset",
    "build_constraints",
    "build_objective",
    "defuzzify",
    "fit_it2fr",
    "fit_tt2fr",
    "predict",
    "predicted_reduction",
    "FuzzifierConfig",
    "SeriesPoint",
    "build_dataset",
    "fuzzify_window",
    "load_csv",
    "split",
    "ForecastReport",
    "compare",
    "least_squares_baseline",
    "rmse",
    "run_experiment",
]
