"""Level cuts of triangular type-2 numbers.

Cutting the triangular secondary grade at level ``h`` and re-intersecting the
resulting primary grades with zero membership collapses a 3-D triangular
type-2 number into a 2-D interval type-2 footprint. At ``h = 0`` the original
footprint is recovered; at ``h = 1`` each side collapses to a single type-1
leg through the secondary apex.

The construction per side: extend the lower-membership leg as a straight line
past its own support until the upper-membership support endpoint (the anchor),
read off the extended grade there (a nonpositive number), cut the secondary
triangle spanned between that grade and zero at level ``h``, and shoot lines
from ``(peak, 1)`` through the cut grades back down to membership zero. The
roots of those lines are the reduced supports.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numbers import It2TriFou, Tt2Number


class DegenerateSideError(ValueError):
    """A side of the footprint has no lower-leg extent to cut."""


@dataclass(frozen=True)
class SecondarySlice:
    """Geometry of one side's secondary triangle at the outer anchor.

    ``y_outer`` is the upper membership evaluated at its own support endpoint,
    hence exactly 0. ``y_inner`` is the lower-membership leg extended linearly
    beyond its support and evaluated at the same anchor, hence nonpositive.
    ``apex`` sits at the configured fraction between them.
    """

    x_anchor: float
    peak_abscissa: float
    y_inner: float
    y_outer: float
    apex: float

    def __post_init__(self) -> None:
        if not (self.y_inner <= self.apex <= self.y_outer):
            raise ValueError(
                f"apex {self.apex} outside secondary span "
                f"[{self.y_inner}, {self.y_outer}]"
            )


@dataclass(frozen=True)
class ReducedFou:
    """Interval type-2 footprint obtained by cutting at level ``h``.

    ``x2h``/``x4h`` are the outer supports (from the reduced upper legs),
    ``x1h``/``x3h`` the inner supports (from the reduced lower legs):
    ``x2h <= x1h <= peak <= x3h <= x4h``.
    """

    h: float
    x1h: float
    x2h: float
    peak: float
    x3h: float
    x4h: float

    def __post_init__(self) -> None:
        if not (self.x2h <= self.x1h <= self.peak <= self.x3h <= self.x4h):
            raise ValueError(
                "reduced footprint ordering violated: "
                f"({self.x2h}, {self.x1h}, {self.peak}, {self.x3h}, {self.x4h})"
            )

    def to_fou(self) -> It2TriFou:
        """Reinterpret as a plain interval type-2 footprint (lossless)."""
        return It2TriFou(self.x2h, self.x1h, self.peak, self.x3h, self.x4h)


def _slice(x_anchor: float, leg_inner_end: float, peak: float, apex_fraction: float) -> SecondarySlice:
    # Lower leg runs through (leg_inner_end, 0) and (peak, 1); extended to the
    # anchor it evaluates below zero. A zero-width lower leg makes that line
    # vertical, which callers must treat as a degenerate side.
    if peak == leg_inner_end:
        raise DegenerateSideError(
            f"lower leg has zero width at peak {peak}; nothing to cut"
        )
    y_inner = (x_anchor - leg_inner_end) / (peak - leg_inner_end)
    y_outer = 0.0
    apex = y_inner + apex_fraction * (y_outer - y_inner)
    return SecondarySlice(x_anchor, peak, y_inner, y_outer, apex)


def left_slice(t: Tt2Number) -> SecondarySlice:
    """Secondary-triangle geometry on the left side.

    Anchor is the upper support endpoint ``a_low``; the lower leg through
    ``(a_up, 0)`` and ``(peak, 1)`` is extended down to it.
    """
    fou = t.fou
    if fou.a_low == fou.peak:
        raise DegenerateSideError(f"left side of {fou.as_tuple()} is a point")
    return _slice(fou.a_low, fou.a_up, fou.peak, t.apex_fraction)


def right_slice(t: Tt2Number) -> SecondarySlice:
    """Mirror of :func:`left_slice` with anchor ``c_up`` and leg end ``c_low``."""
    fou = t.fou
    if fou.c_up == fou.peak:
        raise DegenerateSideError(f"right side of {fou.as_tuple()} is a point")
    return _slice(fou.c_up, fou.c_low, fou.peak, t.apex_fraction)


def _cut_supports(s: SecondarySlice, h: float) -> tuple[float, float]:
    """Reduced (inner, outer) supports for one side at level ``h``.

    The secondary triangle over ``[y_inner, y_outer]`` is cut at ``h``,
    yielding grades ``y_inner_h = apex - (1-h)(apex - y_inner)`` and
    ``y_outer_h = apex + (1-h)(y_outer - apex)``. Each grade defines a line
    through ``(peak, 1)`` and ``(x_anchor, grade)`` whose membership-zero root
    is the reduced support.
    """
    y_inner_h = s.apex - (1.0 - h) * (s.apex - s.y_inner)
    y_outer_h = s.apex + (1.0 - h) * (s.y_outer - s.apex)
    q = s.peak_abscissa
    denom_inner = 1.0 - y_inner_h
    denom_outer = 1.0 - y_outer_h
    assert denom_inner > 0.0 and denom_outer > 0.0, "cut grade reached 1"
    inner = (s.x_anchor - q) / denom_inner + q
    outer = (s.x_anchor - q) / denom_outer + q
    return inner, outer


def _left_degenerate(fou: It2TriFou) -> bool:
    return fou.a_up == fou.peak


def _right_degenerate(fou: It2TriFou) -> bool:
    return fou.c_low == fou.peak


def reduce_left(t: Tt2Number, h: float) -> tuple[float, float]:
    """Reduced left supports ``(x1h, x2h)`` at level ``h`` in ``[0, 1]``.

    A side whose lower leg has zero width carries no secondary spread to cut
    and reduces to itself.
    """
    _check_level(h)
    fou = t.fou
    if _left_degenerate(fou):
        return fou.a_up, fou.a_low
    return _cut_supports(left_slice(t), h)


def reduce_right(t: Tt2Number, h: float) -> tuple[float, float]:
    """Reduced right supports ``(x3h, x4h)``; mirror of :func:`reduce_left`."""
    _check_level(h)
    fou = t.fou
    if _right_degenerate(fou):
        return fou.c_low, fou.c_up
    return _cut_supports(right_slice(t), h)


def reduce(t: Tt2Number, h: float) -> ReducedFou:
    """Cut ``t`` at level ``h``, producing an interval type-2 footprint.

    ``reduce(t, 0)`` is the identity on the five supports; ``reduce(t, 1)``
    collapses each non-degenerate side to a single support.
    """
    _check_level(h)
    x1h, x2h = reduce_left(t, h)
    x3h, x4h = reduce_right(t, h)
    return ReducedFou(h, x1h, x2h, t.fou.peak, x3h, x4h)


def _check_level(h: float) -> None:
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"cut level must lie in [0, 1], got {h}")
