"""Two-group comparison: shift functions and the intensity-ratio test.

The shift function says how far one sample's distribution must be moved at
each abscissa to match another's; its simultaneous band inverts the
two-sample Kolmogorov-Smirnov acceptance region. The intensity comparison
integrates the squared log ratio of the two groups' normalized surfaces and
calibrates it by permuting subject labels, so within-subject dependence is
preserved under the null.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import kolmogi

from .core import DataError, Dataset, Window
from .density import IntensityGrid, _kernel_sum, chisq_sf, edge_correction
from .rng import substream

_TINY = np.finfo(float).tiny


@dataclass
class ShiftCurve:
    """Empirical shift estimate with a simultaneous confidence band."""

    abscissae: np.ndarray
    delta: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    alpha: float

    def zero_inside(self) -> bool:
        """Whether the equal-distributions line lies fully inside the band."""
        return bool(np.all(self.lower <= 0.0) and np.all(self.upper >= 0.0))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "abscissae": [float(v) for v in self.abscissae],
            "delta": [float(v) for v in self.delta],
            "lower": [float(v) for v in self.lower],
            "upper": [float(v) for v in self.upper],
        }


@dataclass
class RatioTestResult:
    """Observed squared-log-ratio statistic with its permutation p-value."""

    T0: float
    p: float
    m: int
    h1: float
    h2: float
    r_grid: IntensityGrid
    k: int

    def to_dict(self) -> dict:
        w = self.r_grid.window
        return {
            "T0": self.T0,
            "p": self.p,
            "m": self.m,
            "k": self.k,
            "h1": self.h1,
            "h2": self.h2,
            "window": {"x_min": w.x_min, "y_min": w.y_min, "x_max": w.x_max, "y_max": w.y_max},
            "nx": self.r_grid.nx,
            "ny": self.r_grid.ny,
            "log_ratio": [[float(v) for v in row] for row in self.r_grid.values],
        }


class FisherResult(NamedTuple):
    chi2: float
    df: int
    p: float


def _ecdf_ranks(sorted_x: np.ndarray, at: np.ndarray) -> np.ndarray:
    """Number of sample values <= each of ``at`` (right-continuous ECDF counts)."""
    return np.searchsorted(sorted_x, at, side="right")


def _quantile_index(p_times_m, m: int) -> np.ndarray:
    """Left-continuous inverse-CDF index (1-based ceil), clipped to [1, m]."""
    idx = np.ceil(np.asarray(p_times_m) - 1e-12).astype(int)
    return np.clip(idx, 1, m)


def shift_function(x_sample, y_sample, alpha: float = 0.05) -> ShiftCurve:
    """Shift estimate G^(-1)(F(x)) - x at every x of the first sample.

    Conventions: the ECDF is right-continuous with steps k/n, the quantile
    is its left-continuous generalized inverse, and the band half-width on
    the probability scale is the asymptotic two-sample KS critical value
    scaled by sqrt((m+n)/(mn)). These make shift_function(x, x) exactly
    zero. Where F(x) +/- d leaves (0, 1) the corresponding band side is
    unconstrained (+/- inf): the KS acceptance region says nothing about
    quantiles beyond the observed probability range.
    """
    x = np.sort(np.asarray(x_sample, dtype=float).ravel())
    y = np.sort(np.asarray(y_sample, dtype=float).ravel())
    n, m = len(x), len(y)
    if n < 2 or m < 2:
        raise DataError(f"both samples need size >= 2, got {n} and {m}")

    ranks = _ecdf_ranks(x, x)  # k with F(x) = k/n
    # exact integer ceil of (k/n)*m avoids float rank drift
    delta_idx = -(-(ranks * m) // n)
    delta = y[np.clip(delta_idx, 1, m) - 1] - x

    d = kolmogi(alpha) * np.sqrt((n + m) / (n * m))
    p = ranks / n
    p_lo = p - d
    p_hi = p + d
    lower = np.where(
        p_lo > 0.0, y[_quantile_index(p_lo * m, m) - 1] - x, -np.inf
    )
    upper = np.where(
        p_hi < 1.0, y[_quantile_index(p_hi * m, m) - 1] - x, np.inf
    )
    return ShiftCurve(x, delta, lower, upper, alpha)


def log_density_ratio(g1: IntensityGrid, g2: IntensityGrid) -> IntensityGrid:
    """Cellwise log of the ratio of the two normalized surfaces.

    Each grid is first scaled to integrate to one, so the result does not
    depend on the two point counts. The returned carrier has no bandwidth
    of its own (two went in); its bandwidth field is NaN.
    """
    if not g1.same_geometry(g2):
        raise DataError("grids differ in window or resolution")
    f1 = g1.values / g1.integral()
    f2 = g2.values / g2.integral()
    r = np.log(np.maximum(f1, _TINY)) - np.log(np.maximum(f2, _TINY))
    return IntensityGrid(g1.window, g1.nx, g1.ny, r, float("nan"))


def ratio_statistic(r_grid: IntensityGrid) -> float:
    """Squared log ratio integrated over the window (midpoint Riemann sum)."""
    return float((r_grid.values**2).sum() * r_grid.cell_area)


def _subject_surfaces(
    subjects: list[np.ndarray], w: Window, h: float, nx: int, ny: int
) -> np.ndarray:
    """Per-subject edge-corrected kernel terms on the grid, stacked (s, ny*nx).

    Summing any subset of rows gives that subset's intensity estimate, which
    is what makes label permutations cheap.
    """
    xs = w.x_min + (np.arange(nx) + 0.5) * (w.width / nx)
    ys = w.y_min + (np.arange(ny) + 0.5) * (w.height / ny)
    ex, ey = np.meshgrid(xs, ys)
    corr = edge_correction(ex, ey, w, h).ravel()
    rows = np.empty((len(subjects), nx * ny))
    for i, pts in enumerate(subjects):
        rows[i] = _kernel_sum(pts, ex, ey, h).ravel() / corr
    return rows


def _labeled_statistic(
    rows1: np.ndarray, rows2: np.ndarray, idx1, idx2, cell_area: float
) -> tuple[float, np.ndarray]:
    lam1 = np.maximum(rows1[idx1].sum(axis=0), _TINY)
    lam2 = np.maximum(rows2[idx2].sum(axis=0), _TINY)
    r = np.log(lam1 / (lam1.sum() * cell_area)) - np.log(lam2 / (lam2.sum() * cell_area))
    return float((r**2).sum() * cell_area), r


def permutation_test(
    dataset: Dataset,
    group_sizes: tuple[int, int] | None = None,
    m: int = 10_000,
    h1: float | None = None,
    h2: float | None = None,
    seed: int = 0,
    nx: int = 128,
    ny: int = 128,
    h_grid=None,
) -> RatioTestResult:
    """Monte Carlo test of equal intensity surfaces between the two groups.

    Subject labels (not individual fixations) are reassigned uniformly at
    random m times; the statistic is recomputed with the same fixed
    bandwidths h1/h2 applied to the first/second group slot, and
    p = (k+1)/(m+1) with k the count of permuted statistics >= the observed
    one. When a bandwidth is None it is chosen once from the observed group
    by cross-validation over ``h_grid``. Deterministic given ``seed``.
    """
    paintings = dataset.painting_ids()
    if len(paintings) != 1:
        raise DataError(
            f"permutation test expects one painting, dataset has {paintings}"
        )
    seqs1 = dataset.by_group("novice")
    seqs2 = dataset.by_group("non_novice")
    n1, n2 = len(seqs1), len(seqs2)
    if group_sizes is not None and tuple(group_sizes) != (n1, n2):
        raise DataError(f"group_sizes {group_sizes} != observed ({n1}, {n2})")
    if n1 < 2 or n2 < 2:
        raise DataError(f"need at least 2 subjects per group, got {n1} and {n2}")

    subject_pts = [s.locations() for s in seqs1 + seqs2]
    if any(len(p) == 0 for p in subject_pts):
        raise DataError("every subject needs at least one fixation")
    w = dataset.window

    from .density import select_bandwidth_cv  # local to avoid cycle at import

    if h_grid is None:
        h_grid = np.geomspace(8.0, 64.0, 9)
    if h1 is None:
        h1 = select_bandwidth_cv(np.vstack(subject_pts[:n1]), w, h_grid, nx, ny)
    if h2 is None:
        h2 = select_bandwidth_cv(np.vstack(subject_pts[n1:]), w, h_grid, nx, ny)
    if h1 <= 0 or h2 <= 0:
        raise DataError("bandwidths must be positive")

    rows_h1 = _subject_surfaces(subject_pts, w, h1, nx, ny)
    rows_h2 = _subject_surfaces(subject_pts, w, h2, nx, ny)
    cell_area = (w.width / nx) * (w.height / ny)

    observed1 = np.arange(n1)
    observed2 = np.arange(n1, n1 + n2)
    T0, r0 = _labeled_statistic(rows_h1, rows_h2, observed1, observed2, cell_area)

    k = 0
    total = n1 + n2
    for j in range(1, m + 1):
        perm = substream(seed, "perm", j).permutation(total)
        T_j, _ = _labeled_statistic(rows_h1, rows_h2, perm[:n1], perm[n1:], cell_area)
        if T_j >= T0:
            k += 1

    r_grid = IntensityGrid(w, nx, ny, r0.reshape(ny, nx), float("nan"))
    return RatioTestResult(
        T0=T0, p=(k + 1) / (m + 1), m=m, h1=float(h1), h2=float(h2), r_grid=r_grid, k=k
    )


def fisher_combine(p_values) -> FisherResult:
    """Fisher's combination of independent p-values: -2 sum(ln p) ~ chi2(2k)."""
    p_values = np.asarray(p_values, dtype=float).ravel()
    if len(p_values) == 0:
        raise DataError("no p-values to combine")
    if np.any(p_values <= 0.0) or np.any(p_values > 1.0):
        raise DataError("p-values must lie in (0, 1]")
    chi2 = float(-2.0 * np.log(p_values).sum())
    df = 2 * len(p_values)
    return FisherResult(chi2, df, chisq_sf(chi2, df))
