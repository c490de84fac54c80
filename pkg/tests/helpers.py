"""Shared synthetic-data builders for the test suite."""

from __future__ import annotations

import numpy as np

from fixproc import (
    Dataset,
    Fixation,
    FixationModel,
    FixationSequence,
    GammaFit,
    Window,
    simulate_run,
)
from fixproc.density import IntensityGrid
from fixproc.ingest import write_fixations
from fixproc.rng import substream

WINDOW = Window(0.0, 0.0, 770.0, 768.0)


def hotspot_grid(
    w: Window = WINDOW,
    nx: int = 64,
    ny: int = 64,
    center=(400.0, 350.0),
    sd: float = 120.0,
    background: float = 0.05,
    bandwidth: float = 17.0,
) -> IntensityGrid:
    xs = w.x_min + (np.arange(nx) + 0.5) * (w.width / nx)
    ys = w.y_min + (np.arange(ny) + 0.5) * (w.height / ny)
    ex, ey = np.meshgrid(xs, ys)
    vals = np.exp(-((ex - center[0]) ** 2 + (ey - center[1]) ** 2) / (2 * sd**2)) + background
    return IntensityGrid(w, nx, ny, vals, bandwidth)


def toy_model(
    trial_length: float = 180_000.0,
    n_angles: int = 360,
    p_long: float = 0.2,
    center=(400.0, 350.0),
    dur_fix: GammaFit | None = None,
    len_sac: GammaFit | None = None,
    nx: int = 64,
    ny: int = 64,
) -> FixationModel:
    grid = hotspot_grid(center=center, nx=nx, ny=ny)
    return FixationModel(
        intensity_all=grid,
        intensity_first=grid,
        dur_fix=dur_fix or GammaFit(2.0, 1.0 / 150.0, 1000, "fixation_duration"),
        dur_sac=GammaFit(2.5, 1.0 / 20.0, 1000, "saccade_duration"),
        len_sac=len_sac or GammaFit(1.8, 1.0 / 80.0, 1000, "saccade_length"),
        window=WINDOW,
        trial_length=trial_length,
        p_long=p_long,
        n_angles=n_angles,
    )


def simulated_dataset(
    model: FixationModel,
    n_subjects: int = 20,
    seed: int = 0,
    painting_id: str = "koli",
) -> Dataset:
    """Subjects simulated from one model, first half novice, second half not."""
    seqs = []
    for i in range(n_subjects):
        run = simulate_run(model, substream(seed, "subject", i), subject_id=f"s{i:02d}")
        group = "novice" if i < n_subjects // 2 else "non_novice"
        seqs.append(
            FixationSequence(f"s{i:02d}", group, painting_id, run.sequence.fixations)
        )
    return Dataset(window=model.window, sequences=seqs, trial_length=model.trial_length)


def write_csv(dataset: Dataset, path) -> str:
    write_fixations(dataset, path)
    return str(path)


def mixture_points(rng: np.random.Generator, n: int, cx: float, cy: float,
                   sd: float = 90.0, w: Window = WINDOW) -> np.ndarray:
    """n points from 60% Gaussian hotspot + 40% uniform, truncated to the window."""
    pts = np.empty((n, 2))
    filled = 0
    while filled < n:
        m = n - filled
        hot = rng.random(m) < 0.6
        x = np.where(hot, rng.normal(cx, sd, m), rng.uniform(w.x_min, w.x_max, m))
        y = np.where(hot, rng.normal(cy, sd, m), rng.uniform(w.y_min, w.y_max, m))
        ok = w.contains(x, y)
        take = int(ok.sum())
        pts[filled : filled + take] = np.column_stack([x[ok], y[ok]])
        filled += take
    return pts


def sequence_from_points(pts: np.ndarray, subject_id: str, group: str,
                         painting_id: str = "koli") -> FixationSequence:
    fixes = [
        Fixation(float(x), float(y), 1000.0 * i, 200.0) for i, (x, y) in enumerate(pts)
    ]
    return FixationSequence(subject_id, group, painting_id, fixes)
