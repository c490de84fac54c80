import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fixproc import (
    DataError,
    Dataset,
    Fixation,
    FixationSequence,
    StepCurve,
    Window,
    max_corner_distance,
    quadrant_of,
)
from fixproc.core import farthest_corner

W = Window(0.0, 0.0, 770.0, 768.0)


class TestWindow:
    def test_area(self):
        assert W.area == 770 * 768

    def test_degenerate_rejected(self):
        with pytest.raises(DataError):
            Window(0, 0, 0, 10)
        with pytest.raises(DataError):
            Window(0, 5, 10, 5)

    def test_contains_is_closed(self):
        assert W.contains(0, 0)
        assert W.contains(770, 768)
        assert not W.contains(770.001, 10)


class TestQuadrant:
    def test_corner_cases(self):
        assert quadrant_of(1, 1, W) == 1
        assert quadrant_of(769, 767, W) == 4

    def test_midline_tie_break_goes_to_larger_index(self):
        # exactly on both midlines
        assert quadrant_of(385, 384, W) == 4
        assert quadrant_of(385, 1, W) == 2
        assert quadrant_of(1, 384, W) == 3

    def test_partition_matches_half_open_cells(self):
        # the four half-open cells [lo, mid) x [lo, mid) etc. tile the window
        mx, my = 385.0, 384.0
        xs = np.linspace(0, 769.9, 41)
        ys = np.linspace(0, 767.9, 41)
        for x in xs:
            for y in ys:
                expected = 1 + (x >= mx) + 2 * (y >= my)
                assert quadrant_of(x, y, W) == expected

    def test_outside_raises(self):
        with pytest.raises(DataError):
            quadrant_of(-1, 5, W)


class TestMaxCornerDistance:
    def test_unit_square_center(self):
        sq = Window(0, 0, 1, 1)
        assert max_corner_distance(0.5, 0.5, sq) == pytest.approx(math.sqrt(2) / 2)

    def test_unit_square_corner(self):
        sq = Window(0, 0, 1, 1)
        assert max_corner_distance(0, 0, sq) == pytest.approx(math.sqrt(2))

    def test_reference_window_value(self):
        assert max_corner_distance(100, 100, W) == pytest.approx(
            math.hypot(670, 668), abs=1e-9
        )

    @given(
        st.floats(0, 770),
        st.floats(0, 768),
    )
    def test_at_least_half_diagonal(self, x, y):
        half_diag = math.hypot(770, 768) / 2
        assert max_corner_distance(x, y, W) >= half_diag - 1e-9

    @given(
        st.floats(1, 769),
        st.floats(1, 767),
        st.floats(0.01, 1.0),
    )
    def test_point_toward_far_corner_stays_inside(self, x, y, frac):
        # any jump up to the far-corner distance along that direction is feasible
        l_max = max_corner_distance(x, y, W)
        cx, cy = farthest_corner(x, y, W)
        ux, uy = (cx - x) / l_max, (cy - y) / l_max
        length = frac * l_max
        px, py = x + length * ux, y + length * uy
        assert W.contains(min(max(px, 0), 770), min(max(py, 0), 768))
        assert -1e-9 <= px <= 770 + 1e-9
        assert -1e-9 <= py <= 768 + 1e-9


class TestSequences:
    def test_onsets_must_increase(self):
        with pytest.raises(DataError):
            FixationSequence(
                "s", "novice", "p",
                [Fixation(1, 1, 100, 50), Fixation(2, 2, 100, 50)],
            )

    def test_group_validated(self):
        with pytest.raises(DataError):
            FixationSequence("s", "expert", "p", [])

    def test_duration_positive(self):
        with pytest.raises(DataError):
            Fixation(1, 1, 0, 0)

    def test_dataset_accessors(self):
        seqs = [
            FixationSequence("a", "novice", "p1", [Fixation(1, 1, 0, 50)]),
            FixationSequence("b", "non_novice", "p1", [Fixation(2, 2, 0, 50)]),
            FixationSequence("a", "novice", "p2", [Fixation(3, 3, 0, 50)]),
        ]
        d = Dataset(window=W, sequences=seqs)
        assert d.subjects() == ["a", "b"]
        assert d.painting_ids() == ["p1", "p2"]
        assert len(d.by_group("novice")) == 2
        assert d.pooled_locations("novice").shape == (2, 2)


class TestStepCurve:
    def test_right_continuous_at_knots(self):
        c = StepCurve([0.0, 10.0, 20.0], [0.0, 1.0, 3.0], 30.0)
        assert c(10.0) == 1.0  # post-jump value exactly at the knot
        assert c(9.999) == 0.0
        assert c(25.0) == 3.0

    def test_before_first_knot_is_nan(self):
        c = StepCurve([5.0], [1.0], 10.0)
        assert np.isnan(c(2.0))

    def test_knots_must_increase(self):
        with pytest.raises(DataError):
            StepCurve([0.0, 0.0], [1.0, 2.0], 10.0)

    @given(st.lists(st.floats(0, 100), min_size=1, max_size=30, unique=True))
    def test_matches_linear_scan(self, ts):
        knots = np.sort(np.asarray(ts))
        values = np.arange(len(knots), dtype=float)
        c = StepCurve(knots, values, 101.0)
        for t in np.linspace(0, 100, 37):
            expected = np.nan
            for kt, kv in zip(knots, values):
                if kt <= t:
                    expected = kv
            got = c(t)
            assert (np.isnan(expected) and np.isnan(got)) or got == expected
