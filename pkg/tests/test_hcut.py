"""Tests for the level-cut reduction of triangular type-2 numbers."""

import numpy as np
import pytest

from t2freg.hcut import (
    DegenerateSideError,
    ReducedFou,
    left_slice,
    reduce,
    reduce_left,
    reduce_right,
    right_slice,
)
from t2freg.numbers import It2TriFou, Tt2Number

from conftest import geometric_cut_oracle, random_tt2

REF = Tt2Number(It2TriFou(0, 1, 2, 3, 4))


def line_through(p1, p2):
    """Two-point line oracle: independent of the slice construction."""
    (x1, y1), (x2, y2) = p1, p2
    slope = (y2 - y1) / (x2 - x1)
    return lambda x: y1 + slope * (x - x1)


class TestSlices:
    def test_left_slice_reference(self):
        s = left_slice(REF)
        assert s.x_anchor == 0.0
        assert s.peak_abscissa == 2.0
        assert s.y_outer == 0.0
        assert s.y_inner == -1.0
        assert s.apex == -0.5

    def test_left_slice_matches_line_oracle(self):
        fou = REF.fou
        line = line_through((fou.a_up, 0.0), (fou.peak, 1.0))
        assert left_slice(REF).y_inner == pytest.approx(line(fou.a_low), abs=1e-12)

    def test_coincident_legs_give_zero(self):
        t = Tt2Number(It2TriFou(1, 1, 2, 3, 4))
        s = left_slice(t)
        assert s.y_inner == 0.0
        assert s.apex == 0.0

    def test_wider_fou(self):
        t = Tt2Number(It2TriFou(0, 2, 4, 6, 8))
        s = left_slice(t)
        line = line_through((2.0, 0.0), (4.0, 1.0))
        assert s.y_inner == pytest.approx(line(0.0), abs=1e-12)
        assert s.y_inner == -1.0
        assert s.apex == -0.5

    def test_right_slice_mirror(self):
        s = right_slice(REF)
        assert s.x_anchor == 4.0
        line = line_through((REF.fou.c_low, 0.0), (REF.fou.peak, 1.0))
        assert s.y_inner == pytest.approx(line(4.0), abs=1e-12)

    def test_degenerate_sides_raise(self):
        with pytest.raises(DegenerateSideError):
            left_slice(Tt2Number(It2TriFou(2, 2, 2, 3, 4)))
        with pytest.raises(DegenerateSideError):
            right_slice(Tt2Number(It2TriFou(0, 1, 2, 2, 2)))

    def test_apex_fraction_generalizes_midpoint(self):
        t = Tt2Number(It2TriFou(0, 1, 2, 3, 4), apex_fraction=0.25)
        s = left_slice(t)
        assert s.apex == pytest.approx(s.y_inner + 0.25 * (s.y_outer - s.y_inner))


class TestReduceLeft:
    def test_h0_recovers_supports(self):
        assert reduce_left(REF, 0.0) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_h1_collapse(self):
        x1h, x2h = reduce_left(REF, 1.0)
        expected = 2.0 - 2.0 / 1.5
        assert x1h == pytest.approx(expected, abs=1e-12)
        assert x2h == pytest.approx(expected, abs=1e-12)

    def test_h_half_worked_values(self):
        x1h, x2h = reduce_left(REF, 0.5)
        assert x1h == pytest.approx(0.857142857, abs=1e-9)
        assert x2h == pytest.approx(0.4, abs=1e-12)


class TestReduceRight:
    def test_h0_recovers_supports(self):
        assert reduce_right(REF, 0.0) == pytest.approx((3.0, 4.0), abs=1e-12)

    def test_h_half_worked_values(self):
        x3h, x4h = reduce_right(REF, 0.5)
        assert x3h == pytest.approx(3.142857143, abs=1e-9)
        assert x4h == pytest.approx(3.6, abs=1e-12)

    def test_h1_collapse(self):
        x3h, x4h = reduce_right(REF, 1.0)
        expected = 2.0 + 2.0 / 1.5
        assert x3h == pytest.approx(expected, abs=1e-12)
        assert x4h == pytest.approx(expected, abs=1e-12)


class TestReduce:
    def test_identity_at_h0(self):
        r = reduce(REF, 0.0)
        assert (r.x2h, r.x1h, r.peak, r.x3h, r.x4h) == pytest.approx(
            (0.0, 1.0, 2.0, 3.0, 4.0), abs=1e-12
        )

    def test_composition_at_h_half(self):
        r = reduce(REF, 0.5)
        assert r.x2h == pytest.approx(0.4, abs=1e-9)
        assert r.x1h == pytest.approx(0.857142857, abs=1e-9)
        assert r.peak == 2.0
        assert r.x3h == pytest.approx(3.142857143, abs=1e-9)
        assert r.x4h == pytest.approx(3.6, abs=1e-9)

    @pytest.mark.parametrize("h", [0.0, 0.3, 1.0])
    def test_crisp_invariant(self, h):
        crisp = Tt2Number(It2TriFou(5, 5, 5, 5, 5))
        r = reduce(crisp, h)
        assert (r.x2h, r.x1h, r.peak, r.x3h, r.x4h) == (5, 5, 5, 5, 5)

    def test_zero_width_lower_leg_reduces_to_itself(self):
        # The lower leg is vertical: there is no secondary spread to cut.
        t = Tt2Number(It2TriFou(0, 2, 2, 2, 5))
        for h in (0.0, 0.5, 1.0):
            r = reduce(t, h)
            assert (r.x2h, r.x1h, r.x3h, r.x4h) == (0, 2, 2, 5)

    @pytest.mark.parametrize("h", [-0.1, 1.1])
    def test_level_validation(self, h):
        with pytest.raises(ValueError, match="lie in"):
            reduce(REF, h)

    def test_lossless_fou_conversion(self):
        r = reduce(REF, 0.25)
        fou = r.to_fou()
        assert fou.as_tuple() == (r.x2h, r.x1h, r.peak, r.x3h, r.x4h)

    def test_reduced_ordering_invariant(self, rng):
        for _ in range(2000):
            t = random_tt2(rng)
            r = reduce(t, float(rng.uniform(0, 1)))
            assert r.x2h <= r.x1h <= r.peak <= r.x3h <= r.x4h


class TestProperties:
    def test_boundary_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            t = random_tt2(rng)
            r = reduce(t, 0.0)
            orig = (t.fou.a_low, t.fou.a_up, t.fou.peak, t.fou.c_low, t.fou.c_up)
            got = (r.x2h, r.x1h, r.peak, r.x3h, r.x4h)
            assert got == pytest.approx(orig, abs=1e-12)

    def test_collapse_at_h1(self):
        rng = np.random.default_rng(8)
        for _ in range(10_000):
            t = random_tt2(rng)
            r = reduce(t, 1.0)
            assert abs(r.x1h - r.x2h) < 1e-12
            assert abs(r.x3h - r.x4h) < 1e-12

    def test_monotone_nesting(self):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            t = random_tt2(rng)
            h1, h2 = np.sort(rng.uniform(0.0, 1.0, size=2))
            lo, hi = reduce(t, float(h1)), reduce(t, float(h2))
            # outer supports shrink inward
            assert hi.x2h >= lo.x2h - 1e-10
            assert hi.x4h <= lo.x4h + 1e-10
            # inner supports grow outward
            assert hi.x1h <= lo.x1h + 1e-10
            assert hi.x3h >= lo.x3h - 1e-10
            # the higher cut is contained in the lower cut
            assert lo.x2h - 1e-10 <= hi.x2h and hi.x4h <= lo.x4h + 1e-10

    def test_closed_form_matches_geometric_root_oracle(self):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            t = random_tt2(rng, apex_fraction=0.5)
            h = float(rng.uniform(0.0, 1.0))
            _assert_matches_geometry(t, h, 1e-9)

    def test_worked_example_against_oracle(self):
        _assert_matches_geometry(REF, 0.5, 1e-9)


def _assert_matches_geometry(t: Tt2Number, h: float, tol: float) -> None:
    r = reduce(t, h)
    oracle = geometric_cut_oracle(t, h)
    assert (r.x1h, r.x2h, r.x3h, r.x4h) == pytest.approx(oracle, abs=tol)
