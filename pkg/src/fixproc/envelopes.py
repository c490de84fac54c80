"""Global rank envelopes for functional summaries.

A simultaneous envelope is cut from pointwise order statistics of simulated
curves: each curve gets an extreme rank (its most extreme depth over the
whole grid, from below or above, mid-ranks on ties), and the envelope depth
k is pushed as far as possible while keeping the requested fraction of
simulations entirely inside. A same-law curve then falls outside with
probability close to alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .core import DataError, StepCurve
from .summaries import resample_curve


@dataclass
class CurveMatrix:
    """Simulated curves resampled onto one common time grid (rows = curves)."""

    grid: np.ndarray
    rows: np.ndarray

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != self.grid.size:
            raise DataError(
                f"rows shape {self.rows.shape} incompatible with grid of {self.grid.size}"
            )

    @classmethod
    def from_curves(cls, curves: list[StepCurve], grid) -> "CurveMatrix":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.vstack([resample_curve(c, grid) for c in curves]))


@dataclass
class RankEnvelope:
    """Pointwise k-th order-statistic bounds forming a global 1-alpha band."""

    grid: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    k: int
    alpha: float

    def contains(self, values: np.ndarray) -> bool:
        """True when no grid point violates a bound.

        NaN (undefined) observed values or bounds never count as
        violations: there is nothing to compare.
        """
        return self.first_exit_time(values) is None

    def first_exit_time(self, values: np.ndarray) -> float | None:
        values = np.asarray(values, dtype=float)
        bad = np.nonzero((values < self.lower) | (values > self.upper))[0]
        return float(self.grid[bad[0]]) if bad.size else None

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("time_ms,lower,upper\n")
            for t, lo, up in zip(self.grid, self.lower, self.upper):
                fh.write(f"{float(t)!r},{float(lo)!r},{float(up)!r}\n")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "grid": [float(t) for t in self.grid],
            "lower": [float(v) for v in self.lower],
            "upper": [float(v) for v in self.upper],
        }


def default_grid(trial_length: float = 180_000.0, n: int = 361) -> np.ndarray:
    """Uniform grid on [0, trial_length]; 0.5 s spacing at the defaults."""
    return np.linspace(0.0, trial_length, n)


def extreme_ranks(rows: np.ndarray) -> np.ndarray:
    """Per-curve extreme rank: min over the grid of depth from below/above.

    Mid-ranks are used on ties so mass ties (e.g. many curves at zero early
    on) do not pin every curve at rank 1. NaN entries (curve undefined at
    that time, as for not-yet-visited transition rows) contribute no depth;
    an everywhere-undefined curve gets rank +inf.
    """
    finite = np.isfinite(rows)
    counts = finite.sum(axis=0)
    if np.all(finite):
        low = rankdata(rows, method="average", axis=0)
    else:
        low = rankdata(rows, method="average", axis=0, nan_policy="omit")
    high = counts[None, :] + 1 - low
    depth = np.where(finite, np.fmin(low, high), np.inf)
    return depth.min(axis=1)


def rank_envelope(curves: CurveMatrix, alpha: float = 0.05) -> RankEnvelope:
    """Global simultaneous envelope at level 1-alpha from simulated curves.

    k is the largest order-statistic depth for which at least a (1-alpha)
    share of the simulations stays fully inside the [k-th smallest, k-th
    largest] band. Grid points where all curves are undefined get NaN
    bounds (no constraint); points with fewer than k defined values fall
    back to the min/max of what is defined.
    """
    rows = curves.rows
    s = rows.shape[0]
    if not 0 < alpha < 1:
        raise DataError("alpha must be in (0, 1)")
    if s < int(np.ceil(1.0 / alpha)):
        raise DataError(f"need at least {int(np.ceil(1.0 / alpha))} curves, got {s}")

    ranks = extreme_ranks(rows)
    need = int(np.ceil((1.0 - alpha) * s - 1e-9))
    # largest integer k with #{R_j >= k} >= need, i.e. floor of the
    # need-th largest extreme rank
    k = int(np.floor(min(np.sort(ranks)[s - need], (s + 1) / 2) + 1e-9))
    k = max(k, 1)

    ordered = np.sort(rows, axis=0)  # NaN sorts last
    counts = np.isfinite(rows).sum(axis=0)
    cols = np.arange(rows.shape[1])
    # depth per column, capped so short columns keep lower <= upper
    k_eff = np.minimum(k, (np.maximum(counts, 1) + 1) // 2)
    lower = np.where(counts > 0, ordered[k_eff - 1, cols], np.nan)
    upper = np.where(counts > 0, ordered[np.maximum(counts - k_eff, 0), cols], np.nan)
    return RankEnvelope(grid=curves.grid, lower=lower, upper=upper, k=k, alpha=alpha)


def envelope_report(observed: list[np.ndarray], env: RankEnvelope) -> list[dict]:
    """Inside/outside verdict and first exit time for each observed curve."""
    out = []
    for values in observed:
        values = np.asarray(values, dtype=float)
        if values.shape != env.grid.shape:
            raise DataError(
                f"curve of length {values.size} does not match grid of {env.grid.size}"
            )
        out.append(
            {"inside": env.contains(values), "first_exit_time": env.first_exit_time(values)}
        )
    return out
