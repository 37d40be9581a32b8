"""Shared generators for randomized tests.

Everything is seeded through ``numpy.random.default_rng`` so failures
reproduce exactly.
"""

import numpy as np
import pytest
from scipy.optimize import brentq

from t2freg.hcut import left_slice, right_slice
from t2freg.numbers import It2TriFou, Tt2Number, linear_combination
from t2freg.regression import RegressionDataset


def random_fou(rng: np.random.Generator, low: float = -50.0, high: float = 50.0) -> It2TriFou:
    """Five sorted uniforms; strictly increasing with probability one."""
    return It2TriFou(*np.sort(rng.uniform(low, high, size=5)))


def random_tt2(rng: np.random.Generator, apex_fraction: float = 0.5) -> Tt2Number:
    return Tt2Number(random_fou(rng), apex_fraction)


def random_coefficients(rng: np.random.Generator, q: int, pinched: bool) -> np.ndarray:
    """Valid coefficient quintuples, strictly positive.

    ``pinched`` collapses the middle three entries (crisp lower membership),
    which pins the fitted peaks to the generating ones regardless of the
    objective's spread trade-offs; generic spreads do not recover exactly.
    """
    rows = []
    for _ in range(q):
        vals = np.sort(rng.uniform(0.2, 4.0, size=5))
        if pinched:
            vals[1] = vals[3] = vals[2]
        rows.append(vals)
    return np.asarray(rows)


def exact_dataset(
    coeff_rows: np.ndarray, n: int, rng: np.random.Generator
) -> RegressionDataset:
    """Noiseless observations generated by the model itself."""
    q = coeff_rows.shape[0]
    x = rng.uniform(0.5, 3.0, size=(n, q))
    fous = [It2TriFou(*row) for row in coeff_rows]
    outputs = tuple(Tt2Number(linear_combination(fous, x[i])) for i in range(n))
    return RegressionDataset(x, outputs)


def geometric_cut_oracle(t: Tt2Number, h: float) -> tuple[float, float, float, float]:
    """Independent root-finding oracle for the level cut.

    For each side and each cut grade, build the line through ``(peak, 1)``
    and the anchor at that grade, then locate its membership-zero crossing
    with a bracketing root finder. Returns ``(x1h, x2h, x3h, x4h)``.
    """
    out = []
    for slice_fn in (left_slice, right_slice):
        s = slice_fn(t)
        for grade in (
            s.apex - (1 - h) * (s.apex - s.y_inner),
            s.apex + (1 - h) * (s.y_outer - s.apex),
        ):
            def line(x, g=grade):
                return 1.0 + (1.0 - g) / (s.peak_abscissa - s.x_anchor) * (x - s.peak_abscissa)

            span = abs(s.peak_abscissa - s.x_anchor)
            if s.x_anchor < s.peak_abscissa:
                bracket = (s.peak_abscissa - 10 * span, s.peak_abscissa)
            else:
                bracket = (s.peak_abscissa, s.peak_abscissa + 10 * span)
            out.append(brentq(line, *bracket, xtol=1e-13))
    return tuple(out)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
