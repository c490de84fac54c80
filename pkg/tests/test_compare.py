import numpy as np
import pytest

from fixproc import (
    DataError,
    estimate_intensity,
    fisher_combine,
    log_density_ratio,
    permutation_test,
    ratio_statistic,
    shift_function,
)
from fixproc.density import IntensityGrid
from helpers import WINDOW, simulated_dataset, toy_model

W = WINDOW


class TestShiftFunction:
    def test_identical_samples_zero_shift(self, rng):
        x = rng.gamma(2, 100, 80)
        c = shift_function(x, x)
        assert np.all(c.delta == 0.0)
        assert c.zero_inside()

    def test_pure_shift(self, rng):
        x = rng.gamma(2, 100, 60)
        c = shift_function(x, x + 7.0)
        assert np.allclose(c.delta, 7.0)

    def test_hand_worked_example(self):
        c = shift_function([1, 2, 3], [2, 4, 6])
        assert np.array_equal(c.abscissae, [1, 2, 3])
        assert np.array_equal(c.delta, [1, 2, 3])

    def test_shift_equivariance(self, rng):
        x = rng.gamma(2, 100, 50)
        y = rng.gamma(2, 100, 70)
        base = shift_function(x, y)
        moved = shift_function(x, y + 3.25)
        assert np.allclose(moved.delta, base.delta + 3.25, rtol=0, atol=1e-9)

    def test_band_orders_delta(self, rng):
        x = rng.gamma(2, 100, 40)
        y = rng.gamma(3, 80, 55)
        c = shift_function(x, y)
        assert np.all(c.lower <= c.delta)
        assert np.all(c.delta <= c.upper)

    def test_small_samples_rejected(self):
        with pytest.raises(DataError):
            shift_function([1.0], [1.0, 2.0])

    def test_quick_coverage_sanity(self):
        rng = np.random.default_rng(77)
        hits = sum(
            shift_function(rng.gamma(2, 120, 200), rng.gamma(2, 120, 200)).zero_inside()
            for _ in range(60)
        )
        assert hits >= 51  # full calibration in the acceptance suite


def _flat_grid(value=1.0, nx=16, ny=16, h=10.0):
    return IntensityGrid(W, nx, ny, np.full((ny, nx), value), h)


class TestLogDensityRatio:
    def test_equal_grids_zero(self, rng):
        pts = rng.uniform([100, 100], [600, 600], size=(30, 2))
        g = estimate_intensity(pts, W, 20.0, 32, 32)
        r = log_density_ratio(g, g)
        assert np.max(np.abs(r.values)) == 0.0

    def test_scale_invariance(self):
        g1 = _flat_grid(2.0)
        g2 = _flat_grid(1.0)
        r = log_density_ratio(g1, g2)
        assert np.max(np.abs(r.values)) < 1e-12

    def test_antisymmetry(self, rng):
        a = IntensityGrid(W, 8, 8, rng.uniform(0.5, 2.0, (8, 8)), 10.0)
        b = IntensityGrid(W, 8, 8, rng.uniform(0.5, 2.0, (8, 8)), 10.0)
        assert np.allclose(
            log_density_ratio(a, b).values, -log_density_ratio(b, a).values
        )

    def test_mismatched_grids_rejected(self):
        with pytest.raises(DataError):
            log_density_ratio(_flat_grid(nx=16), _flat_grid(nx=8))


class TestRatioStatistic:
    def test_zero_grid(self):
        assert ratio_statistic(_flat_grid(0.0)) == 0.0

    def test_unit_grid_gives_window_area(self):
        g = IntensityGrid(W, 16, 16, np.ones((16, 16)), 10.0)
        assert ratio_statistic(g) == pytest.approx(W.area, rel=1e-12)

    def test_matches_double_loop(self, rng):
        vals = rng.normal(0, 1, (12, 10))
        g = IntensityGrid(W, 10, 12, vals, 10.0)
        acc = 0.0
        for iy in range(12):
            for ix in range(10):
                acc += vals[iy, ix] ** 2 * g.cell_area
        assert ratio_statistic(g) == pytest.approx(acc, abs=1e-12 * max(acc, 1))

    def test_nonnegative(self, rng):
        g = IntensityGrid(W, 8, 8, rng.normal(0, 1, (8, 8)), 10.0)
        assert ratio_statistic(g) >= 0


@pytest.fixture(scope="module")
def tiny_dataset():
    model = toy_model(trial_length=8_000.0)
    return simulated_dataset(model, n_subjects=8, seed=3)


class TestPermutationTest:
    def test_p_respects_formula(self, tiny_dataset):
        res = permutation_test(tiny_dataset, m=49, h1=30.0, h2=30.0, seed=5, nx=24, ny=24)
        assert res.p == (res.k + 1) / (res.m + 1)
        assert 0 < res.p <= 1

    def test_deterministic_given_seed(self, tiny_dataset):
        a = permutation_test(tiny_dataset, m=29, h1=30.0, h2=30.0, seed=9, nx=16, ny=16)
        b = permutation_test(tiny_dataset, m=29, h1=30.0, h2=30.0, seed=9, nx=16, ny=16)
        assert a.T0 == b.T0 and a.p == b.p and a.k == b.k
        assert np.array_equal(a.r_grid.values, b.r_grid.values)

    def test_group_sizes_validated(self, tiny_dataset):
        with pytest.raises(DataError):
            permutation_test(tiny_dataset, group_sizes=(3, 5), m=9, h1=30.0, h2=30.0, seed=1)

    def test_needs_two_subjects_per_group(self, short_model):
        d = simulated_dataset(short_model, n_subjects=2, seed=1)
        with pytest.raises(DataError, match="2 subjects"):
            permutation_test(d, m=9, h1=30.0, h2=30.0, seed=1)

    def test_statistic_against_public_route(self, tiny_dataset):
        # the fast per-subject path must agree with the documented
        # estimate -> normalize -> log-ratio -> integrate route
        res = permutation_test(tiny_dataset, m=9, h1=28.0, h2=32.0, seed=2, nx=20, ny=20)
        g1 = estimate_intensity(tiny_dataset.pooled_locations("novice"), W, 28.0, 20, 20)
        g2 = estimate_intensity(tiny_dataset.pooled_locations("non_novice"), W, 32.0, 20, 20)
        T = ratio_statistic(log_density_ratio(g1, g2))
        assert res.T0 == pytest.approx(T, rel=1e-9)


class TestFisher:
    def test_reference_value(self):
        # six equal p-values tuned so the statistic is exactly 12.685
        p = float(np.exp(-12.685 / 12.0))
        chi2, df, combined = fisher_combine([p] * 6)
        assert chi2 == pytest.approx(12.685, abs=1e-12)
        assert df == 12
        assert combined == pytest.approx(0.392, abs=1e-3)

    def test_all_ones(self):
        chi2, df, p = fisher_combine([1.0, 1.0, 1.0])
        assert chi2 == 0.0
        assert p == 1.0

    def test_six_halves(self):
        chi2, df, p = fisher_combine([0.5] * 6)
        assert chi2 == pytest.approx(12 * np.log(2), rel=1e-12)
        assert df == 12
        assert p == pytest.approx(0.7598, abs=1e-4)

    def test_zero_p_rejected(self):
        with pytest.raises(DataError):
            fisher_combine([0.0, 0.5])

    def test_above_one_rejected(self):
        with pytest.raises(DataError):
            fisher_combine([1.5])
