"""Triangular fuzzy value types: type-1 numbers, interval type-2 footprints,
and triangular type-2 numbers with a triangular secondary grade.

All types are immutable values and every operation is a pure function, so
they can be shared and evaluated from any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence


def _triangle_at(left: float, peak: float, right: float, x: float) -> float:
    """Evaluate a normal triangular membership function at ``x``.

    The support is closed with open positivity: membership is exactly 0 at
    ``left`` and ``right`` and exactly 1 at ``peak``, even when a side is
    degenerate (zero width).
    """
    if x == peak:
        return 1.0
    if x <= left or x >= right:
        return 0.0
    if x < peak:
        return (x - left) / (peak - left)
    return (right - x) / (right - peak)


@dataclass(frozen=True)
class TriT1Number:
    """Triangular type-1 fuzzy number ``(left, peak, right)``.

    Membership rises linearly from 0 at ``left`` to 1 at ``peak`` and falls
    back to 0 at ``right``.
    """

    left: float
    peak: float
    right: float

    def __post_init__(self) -> None:
        if not (self.left <= self.peak <= self.right):
            raise ValueError(
                f"triangle requires left <= peak <= right, "
                f"got ({self.left}, {self.peak}, {self.right})"
            )

    def membership_at(self, x: float) -> float:
        return _triangle_at(self.left, self.peak, self.right, x)


@dataclass(frozen=True)
class It2TriFou:
    """Perfectly normal triangular interval type-2 footprint of uncertainty.

    Five ordered abscissas ``a_low <= a_up <= peak <= c_low <= c_up`` with a
    shared peak. The upper membership function is the triangle
    ``(a_low, peak, c_up)`` and the lower membership function is
    ``(a_up, peak, c_low)``; both reach membership 1 at ``peak``.
    """

    a_low: float
    a_up: float
    peak: float
    c_low: float
    c_up: float

    def __post_init__(self) -> None:
        if not (self.a_low <= self.a_up <= self.peak <= self.c_low <= self.c_up):
            raise ValueError(
                "footprint requires a_low <= a_up <= peak <= c_low <= c_up, "
                f"got {self.as_tuple()}"
            )

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a_low, self.a_up, self.peak, self.c_low, self.c_up)

    def __iter__(self) -> Iterator[float]:
        return iter(self.as_tuple())

    @property
    def umf(self) -> TriT1Number:
        """Upper membership function."""
        return TriT1Number(self.a_low, self.peak, self.c_up)

    @property
    def lmf(self) -> TriT1Number:
        """Lower membership function."""
        return TriT1Number(self.a_up, self.peak, self.c_low)

    def umf_at(self, x: float) -> float:
        """Upper membership grade at ``x``; 0 outside ``[a_low, c_up]``."""
        return _triangle_at(self.a_low, self.peak, self.c_up, x)

    def lmf_at(self, x: float) -> float:
        """Lower membership grade at ``x``; 0 outside ``[a_up, c_low]``."""
        return _triangle_at(self.a_up, self.peak, self.c_low, x)

    @property
    def is_crisp(self) -> bool:
        return self.a_low == self.c_up

    def __add__(self, other: "It2TriFou") -> "It2TriFou":
        if not isinstance(other, It2TriFou):
            return NotImplemented
        return add(self, other)

    def __mul__(self, k: float) -> "It2TriFou":
        if not isinstance(k, (int, float)):
            return NotImplemented
        return scale(self, float(k))

    __rmul__ = __mul__


@dataclass(frozen=True)
class Tt2Number:
    """Triangular type-2 fuzzy number.

    An interval type-2 footprint plus a triangular secondary membership over
    the primary-grade interval at each point. ``apex_fraction`` places the
    secondary apex inside ``[lmf(x), umf(x)]``; 0.5 gives the symmetric
    secondary used throughout and is the only value exercised by the
    forecasting pipeline.
    """

    fou: It2TriFou
    apex_fraction: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.apex_fraction <= 1.0:
            raise ValueError(f"apex_fraction must lie in [0, 1], got {self.apex_fraction}")

    @property
    def peak(self) -> float:
        return self.fou.peak

    @property
    def is_crisp(self) -> bool:
        return self.fou.is_crisp

    def secondary_at(self, x: float, grade: float) -> float:
        """Secondary membership of primary grade ``grade`` at point ``x``.

        Triangular over ``[lmf(x), umf(x)]`` with apex at the configured
        fraction of that interval.
        """
        lo = self.fou.lmf_at(x)
        hi = self.fou.umf_at(x)
        apex = lo + self.apex_fraction * (hi - lo)
        return _triangle_at(lo, apex, hi, grade)


def scale(fou: It2TriFou, k: float) -> It2TriFou:
    """Multiply every support abscissa by a positive scalar ``k``.

    Negative or zero ``k`` is rejected: the regression model assumes strictly
    positive regressor values, and the support ordering does not survive a
    sign flip.
    """
    if k <= 0:
        raise ValueError(f"scale factor must be positive, got {k}")
    return It2TriFou(k * fou.a_low, k * fou.a_up, k * fou.peak, k * fou.c_low, k * fou.c_up)


def add(x: It2TriFou, y: It2TriFou) -> It2TriFou:
    """Fieldwise sum of two footprints; ordering is preserved exactly."""
    return It2TriFou(
        x.a_low + y.a_low,
        x.a_up + y.a_up,
        x.peak + y.peak,
        x.c_low + y.c_low,
        x.c_up + y.c_up,
    )


def linear_combination(coeff_fous: Sequence[It2TriFou], x_row: Sequence[float]) -> It2TriFou:
    """Fieldwise dot product of coefficient footprints with a positive row.

    Summation runs left to right over the regressors (ascending index) so
    results are bit-reproducible across runs.
    """
    if len(coeff_fous) != len(x_row):
        raise ValueError(
            f"dimension mismatch: {len(coeff_fous)} coefficients vs {len(x_row)} inputs"
        )
    if len(x_row) == 0:
        raise ValueError("empty linear combination")
    a_low = a_up = peak = c_low = c_up = 0.0
    for fou, x in zip(coeff_fous, x_row):
        if x <= 0:
            raise ValueError(f"inputs must be strictly positive, got {x}")
        a_low += fou.a_low * x
        a_up += fou.a_up * x
        peak += fou.peak * x
        c_low += fou.c_low * x
        c_up += fou.c_up * x
    return It2TriFou(a_low, a_up, peak, c_low, c_up)
