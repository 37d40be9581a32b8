"""Fitting fuzzy regression coefficients to crisp-input / fuzzy-output data.

The model is ``Y_i = sum_j A_j * x_ij`` where each coefficient ``A_j`` is an
interval type-2 footprint quintuple ``(a_low, a_up, b, c_low, c_up)`` and the
inputs are strictly positive. Fitting assembles a dense QP over the ``5q``
stacked coefficients:

* a quadratic objective combining four spread/fit terms (see
  :func:`build_objective`), with two published sign conventions exposed as
  ``objective_mode``;
* four linear inclusion rows per observation tying the predicted level-``h``
  cut to the observed one (possibility on the upper membership, necessity on
  the lower), plus the ordering chain ``0 <= a_low <= a_up <= b <= c_low <=
  c_up`` per regressor.

Triangular type-2 observations are first reduced at level ``h`` into interval
type-2 footprints (:mod:`t2freg.hcut`); fitting then proceeds identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import hcut, qp
from .numbers import It2TriFou, Tt2Number, linear_combination

# Column order of one coefficient quintuple inside the stacked QP vector.
_A_LOW, _A_UP, _B, _C_LOW, _C_UP = range(5)

_CHAIN_LABELS = (
    "0 <= a_low",
    "a_low <= a_up",
    "a_up <= b",
    "b <= c_low",
    "c_low <= c_up",
)
_INCLUSION_LABELS = (
    "upper-left possibility",
    "upper-right possibility",
    "lower-left necessity",
    "lower-right necessity",
)

PAPER_LITERAL = "paper_literal"
TEXT_CONSISTENT = "text_consistent"
_MODES = (PAPER_LITERAL, TEXT_CONSISTENT)


class InfeasibleFitError(ValueError):
    """No coefficient set satisfies the inclusion constraints.

    Carries the index (and a description) of the first constraint violated at
    the best-margin point the feasibility phase could find.
    """

    def __init__(self, row_index: int, description: str):
        self.row_index = row_index
        self.description = description
        super().__init__(
            f"infeasible fit: constraint {row_index} ({description}) cannot be satisfied"
        )


class UnboundedFitError(ValueError):
    """The objective escapes to infinity over the feasible set."""


@dataclass(frozen=True)
class CoefficientSet:
    """One fitted quintuple per regressor, as a ``(q, 5)`` array with columns
    ``(a_low, a_up, b, c_low, c_up)`` and ``0 <= a_low <= ... <= c_up``."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != 5 or v.shape[0] < 1:
            raise ValueError(f"coefficient array must be (q, 5), got {v.shape}")
        if np.any(v[:, 0] < 0.0) or np.any(np.diff(v, axis=1) < 0.0):
            raise ValueError(f"coefficient ordering chain violated:\n{v}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n_regressors(self) -> int:
        return self.values.shape[0]

    @property
    def peaks(self) -> np.ndarray:
        return self.values[:, _B]

    def as_fous(self) -> list[It2TriFou]:
        return [It2TriFou(*row) for row in self.values]

    def to_dict(self) -> dict:
        return {"coefficients": [[float(x) for x in row] for row in self.values]}

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientSet":
        return cls(np.asarray(data["coefficients"], dtype=float))


@dataclass(frozen=True)
class RegressionDataset:
    """Strictly positive crisp inputs paired with triangular type-2 outputs."""

    inputs: np.ndarray
    outputs: tuple[Tt2Number, ...]

    def __post_init__(self) -> None:
        x = np.asarray(self.inputs, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise ValueError(f"inputs must be a nonempty 2-D matrix, got shape {x.shape}")
        if np.any(x <= 0.0):
            raise ValueError("all inputs must be strictly positive")
        outs = tuple(self.outputs)
        if len(outs) != x.shape[0]:
            raise ValueError(
                f"{len(outs)} outputs for {x.shape[0]} input rows"
            )
        x = x.copy()
        x.flags.writeable = False
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "outputs", outs)

    @property
    def n_observations(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_regressors(self) -> int:
        return self.inputs.shape[1]


@dataclass(frozen=True)
class FitConfig:
    """Fitting knobs.

    ``objective_mode`` selects the sign convention of the composite objective:
    ``"paper_literal"`` keeps the as-printed form (+spread terms, -fit term,
    +necessity spread); ``"text_consistent"`` follows the accompanying prose
    (fit term minimized, necessity spread maximized) and is the default.
    ``necessity_rhs_minus`` switches the lower-necessity bound to its
    alternate printed sign (kept for comparability; it fails the ``h = 0``
    containment sanity check).
    """

    h: float = 0.4
    term_weights: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    objective_mode: str = TEXT_CONSISTENT
    necessity_rhs_minus: bool = False
    solver: qp.SolverConfig = field(default_factory=qp.SolverConfig)

    def __post_init__(self) -> None:
        if not 0.0 <= self.h < 1.0:
            raise ValueError(f"h must lie in [0, 1), got {self.h}")
        if len(self.term_weights) != 4 or any(w < 0 for w in self.term_weights):
            raise ValueError(f"term_weights must be 4 nonnegative reals, got {self.term_weights}")
        if self.objective_mode not in _MODES:
            raise ValueError(f"objective_mode must be one of {_MODES}, got {self.objective_mode!r}")


def _as_input_matrix(inputs) -> np.ndarray:
    x = np.asarray(inputs, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"inputs must be 2-D, got shape {x.shape}")
    if np.any(x <= 0.0):
        raise ValueError("all inputs must be strictly positive")
    return x


def build_objective(
    inputs,
    target_peaks,
    term_weights: Sequence[float] = (1.0, 1.0, 1.0, 1.0),
    objective_mode: str = TEXT_CONSISTENT,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Quadratic objective ``0.5 z'Hz + g'z + c`` over the stacked quintuples.

    The four terms, each summed over observations:

    * secondary spread: ``[(a_up - a_low) x]^2 + [(c_up - c_low) x]^2``
      (always minimized);
    * lower-membership spread: ``[(c_low - a_up) x]^2`` (always minimized);
    * peak fit: ``[q_i - sum_j b_j x_ij]^2``;
    * necessity spread: ``[(c_low - a_low) x]^2``.

    ``text_consistent`` minimizes the fit term and maximizes the necessity
    spread; ``paper_literal`` flips both signs.
    """
    x = _as_input_matrix(inputs)
    peaks = np.asarray(target_peaks, dtype=float)
    n, q = x.shape
    if peaks.shape != (n,):
        raise ValueError(f"target peaks shape {peaks.shape} does not match {n} rows")
    if objective_mode not in _MODES:
        raise ValueError(f"unknown objective_mode {objective_mode!r}")
    l1, l2, l3, l4 = (float(w) for w in term_weights)
    fit_sign = 1.0 if objective_mode == TEXT_CONSISTENT else -1.0
    necessity_sign = -fit_sign

    dim = 5 * q
    hess = np.zeros((dim, dim))
    grad = np.zeros(dim)
    const = 0.0

    sq = np.einsum("ij,ij->j", x, x)
    for j in range(q):
        base = 5 * j
        pairs = (
            (base + _A_UP, base + _A_LOW, l1),
            (base + _C_UP, base + _C_LOW, l1),
            (base + _C_LOW, base + _A_UP, l2),
            (base + _C_LOW, base + _A_LOW, necessity_sign * l4),
        )
        for u, v, lam in pairs:
            w = 2.0 * lam * sq[j]
            hess[u, u] += w
            hess[v, v] += w
            hess[u, v] -= w
            hess[v, u] -= w

    b_idx = 5 * np.arange(q) + _B
    hess[np.ix_(b_idx, b_idx)] += 2.0 * fit_sign * l3 * (x.T @ x)
    grad[b_idx] += -2.0 * fit_sign * l3 * (x.T @ peaks)
    const += fit_sign * l3 * float(peaks @ peaks)
    return hess, grad, const


def build_constraints(
    inputs,
    observed,
    h: float,
    necessity_rhs_minus: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Linear rows ``Az <= b``: four inclusion rows per observation followed
    by the five-row ordering chain per regressor.

    With observed quintuple ``(p_low, p_up, q, r_low, r_up)`` and writing
    ``cut(v, w) = h*v + (1-h)*w`` for the level-``h`` mix, the rows are

    1. ``cut(By, Ay_low)  <= cut(q, p_low)``  (upper membership, left)
    2. ``cut(By, Cy_up)   >= cut(q, r_up)``   (upper membership, right)
    3. ``cut(By, Ay_up)   >= cut(q, p_up)``   (lower membership, left)
    4. ``cut(By, Cy_low)  <= cut(q, r_low)``  (lower membership, right)

    so the observed upper cut is contained in the predicted one and the
    predicted lower cut is contained in the observed one.
    ``necessity_rhs_minus`` replaces row 4's bound with
    ``(2-h) q - (1-h) r_low`` (the alternate sign convention).
    """
    x = _as_input_matrix(inputs)
    obs = np.asarray(observed, dtype=float)
    n, q = x.shape
    if obs.shape != (n, 5):
        raise ValueError(f"observed quintuples must be ({n}, 5), got {obs.shape}")
    if not 0.0 <= h < 1.0:
        raise ValueError(f"h must lie in [0, 1), got {h}")

    dim = 5 * q
    rows = np.zeros((4 * n + 5 * q, dim))
    rhs = np.zeros(4 * n + 5 * q)
    p_low, p_up, peaks, r_low, r_up = obs.T

    for i in range(n):
        xi = x[i]
        r = 4 * i
        for j in range(q):
            base = 5 * j
            rows[r + 0, base + _A_LOW] = (1.0 - h) * xi[j]
            rows[r + 0, base + _B] += h * xi[j]
            rows[r + 1, base + _C_UP] = -(1.0 - h) * xi[j]
            rows[r + 1, base + _B] += -h * xi[j]
            rows[r + 2, base + _A_UP] = -(1.0 - h) * xi[j]
            rows[r + 2, base + _B] += -h * xi[j]
            rows[r + 3, base + _C_LOW] = (1.0 - h) * xi[j]
            rows[r + 3, base + _B] += h * xi[j]
        rhs[r + 0] = h * peaks[i] + (1.0 - h) * p_low[i]
        rhs[r + 1] = -(h * peaks[i] + (1.0 - h) * r_up[i])
        rhs[r + 2] = -(h * peaks[i] + (1.0 - h) * p_up[i])
        if necessity_rhs_minus:
            rhs[r + 3] = (2.0 - h) * peaks[i] - (1.0 - h) * r_low[i]
        else:
            rhs[r + 3] = h * peaks[i] + (1.0 - h) * r_low[i]

    for j in range(q):
        r = 4 * n + 5 * j
        base = 5 * j
        rows[r, base + _A_LOW] = -1.0
        for k in range(4):
            rows[r + 1 + k, base + k] = 1.0
            rows[r + 1 + k, base + k + 1] = -1.0
    return rows, rhs


def describe_constraint(row_index: int, n_observations: int) -> str:
    """Human label for a row of :func:`build_constraints`."""
    if row_index < 4 * n_observations:
        return f"observation {row_index // 4}, {_INCLUSION_LABELS[row_index % 4]}"
    chain = row_index - 4 * n_observations
    return f"regressor {chain // 5}, chain {_CHAIN_LABELS[chain % 5]}"


def _repair_chain(values: np.ndarray, tol: float) -> np.ndarray:
    """Snap solver-level rounding off the ordering chain; anything beyond
    ``tol`` is a solver failure, not rounding."""
    worst = max(
        float(np.max(-values[:, 0], initial=0.0)),
        float(np.max(-np.diff(values, axis=1), initial=0.0)),
    )
    if worst > tol:
        raise RuntimeError(
            f"solver returned a point {worst:.3e} outside the ordering chain"
        )
    fixed = values.copy()
    fixed[:, 0] = np.maximum(fixed[:, 0], 0.0)
    np.maximum.accumulate(fixed, axis=1, out=fixed)
    return fixed


def _fit_core(inputs: np.ndarray, observed: np.ndarray, config: FitConfig) -> CoefficientSet:
    x = inputs
    n, q = x.shape
    # Rescale columns and targets to O(1); the QP is exactly equivalent and
    # far better conditioned, and the solution maps back by positive factors
    # that preserve every ordering.
    col_scale = x.mean(axis=0)
    y_scale = float(np.mean(np.abs(observed[:, 2])))
    if y_scale <= 0.0:
        y_scale = 1.0
    xs = x / col_scale
    obs_s = observed / y_scale

    hess, grad, const = build_objective(
        xs, obs_s[:, 2], config.term_weights, config.objective_mode
    )
    rows, rhs = build_constraints(xs, obs_s, config.h, config.necessity_rhs_minus)
    problem = qp.QpProblem(hess, grad, const, rows, rhs)
    sol = qp.solve(problem, config.solver)

    if sol.status == qp.INFEASIBLE:
        violations = problem.violations(sol.point)
        bad = np.flatnonzero(violations > config.solver.feasibility_tol)
        idx = int(bad[0]) if bad.size else int(np.argmax(violations))
        raise InfeasibleFitError(idx, describe_constraint(idx, n))
    if sol.status == qp.UNBOUNDED:
        raise UnboundedFitError("fit objective is unbounded below on the feasible set")

    stacked = sol.point.reshape(q, 5) * (y_scale / col_scale[:, None])
    repaired = _repair_chain(stacked, tol=1e-6 * (1.0 + float(np.abs(stacked).max())))
    return CoefficientSet(repaired)


def fit_it2fr(
    inputs,
    observed: Sequence[It2TriFou],
    config: FitConfig = FitConfig(),
) -> CoefficientSet:
    """Fit coefficients to interval type-2 observations at level ``config.h``."""
    x = _as_input_matrix(inputs)
    obs = np.asarray([f.as_tuple() for f in observed], dtype=float)
    if obs.shape[0] != x.shape[0]:
        raise ValueError(f"{obs.shape[0]} observations for {x.shape[0]} input rows")
    return _fit_core(x, obs, config)


def fit_tt2fr(dataset: RegressionDataset, config: FitConfig = FitConfig()) -> CoefficientSet:
    """Fit coefficients to triangular type-2 observations.

    Each observation is reduced at level ``config.h`` into an interval type-2
    footprint and the interval fit runs on the reduced data; at ``h = 0`` the
    reduction is the identity and this coincides with :func:`fit_it2fr` on
    the raw footprints.
    """
    reduced = [hcut.reduce(t, config.h).to_fou() for t in dataset.outputs]
    return fit_it2fr(dataset.inputs, reduced, config)


def predict(coeffs: CoefficientSet, x_row: Sequence[float]) -> It2TriFou:
    """Predicted footprint for one strictly positive input row."""
    return linear_combination(coeffs.as_fous(), x_row)


def predicted_reduction(
    predicted: It2TriFou, h: float, apex_fraction: float = 0.5
) -> hcut.ReducedFou:
    """Level-``h`` cut of a predicted footprint, for reporting the predicted
    membership band; it does not participate in fitting."""
    return hcut.reduce(Tt2Number(predicted, apex_fraction), h)


def defuzzify(fou: It2TriFou, method: str = "peak") -> float:
    """Crisp representative of a footprint.

    ``"peak"`` (default) is the unique membership-1 abscissa; ``"centroid"``
    averages the centroids of the upper and lower triangles, for sensitivity
    checks.
    """
    if method == "peak":
        return fou.peak
    if method == "centroid":
        upper = (fou.a_low + fou.peak + fou.c_up) / 3.0
        lower = (fou.a_up + fou.peak + fou.c_low) / 3.0
        return (upper + lower) / 2.0
    raise ValueError(f"unknown defuzzification method {method!r}")
