"""Domain types and elementary geometry shared by the whole pipeline.

Coordinates are continuous pixels in image convention: the y axis points
down, so "upper" quadrants have *smaller* y. Times are milliseconds since
trial start. All types here are immutable value objects and safe to share
between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NOVICE = "novice"
NON_NOVICE = "non_novice"
GROUPS = (NOVICE, NON_NOVICE)


class DataError(ValueError):
    """Invalid or inconsistent input data."""


class NumericError(ArithmeticError):
    """A numeric procedure failed (non-convergence, degenerate input)."""


@dataclass(frozen=True)
class Window:
    """Rectangular observation region (the painting extent) in pixels."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise DataError(f"degenerate window {self!r}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, x, y) -> np.ndarray | bool:
        """Closed-rectangle membership test; works on scalars and arrays."""
        return (
            (np.asarray(x) >= self.x_min)
            & (np.asarray(x) <= self.x_max)
            & (np.asarray(y) >= self.y_min)
            & (np.asarray(y) <= self.y_max)
        )

    def corners(self) -> np.ndarray:
        return np.array(
            [
                [self.x_min, self.y_min],
                [self.x_max, self.y_min],
                [self.x_min, self.y_max],
                [self.x_max, self.y_max],
            ]
        )


#: Extent of the reference painting image (770 x 768 px).
REFERENCE_WINDOW = Window(0.0, 0.0, 770.0, 768.0)

#: Trials in the reference experiment last three minutes.
DEFAULT_TRIAL_LENGTH_MS = 180_000.0

#: Fixations shorter than this are treated as spurious and excluded.
MIN_FIXATION_MS = 40.0


@dataclass(frozen=True, slots=True)
class Fixation:
    """One gaze stop: location (px), onset and duration (ms)."""

    x: float
    y: float
    onset: float
    duration: float

    def __post_init__(self):
        if self.duration <= 0:
            raise DataError(f"fixation duration must be positive, got {self.duration}")

    @property
    def end(self) -> float:
        return self.onset + self.duration


@dataclass(frozen=True, slots=True)
class Saccade:
    """Jump between two fixations of one sequence.

    ``from_index``/``to_index`` are positions in the (filtered) sequence.
    ``valid`` is False when the jump spans one or more excluded fixations
    and therefore does not correspond to a single real saccade.
    """

    from_index: int
    to_index: int
    length: float
    duration: float
    valid: bool = True


@dataclass
class FixationSequence:
    """One subject's ordered fixations on one painting."""

    subject_id: str
    group: str
    painting_id: str
    fixations: list[Fixation] = field(default_factory=list)

    def __post_init__(self):
        if self.group not in GROUPS:
            raise DataError(f"unknown group {self.group!r}, expected one of {GROUPS}")
        onsets = [f.onset for f in self.fixations]
        if any(b <= a for a, b in zip(onsets, onsets[1:])):
            raise DataError(
                f"onsets not strictly increasing for subject {self.subject_id!r}"
            )

    def __len__(self) -> int:
        return len(self.fixations)

    def locations(self) -> np.ndarray:
        """(n, 2) array of fixation locations."""
        if not self.fixations:
            return np.empty((0, 2))
        return np.array([[f.x, f.y] for f in self.fixations])

    def onsets(self) -> np.ndarray:
        return np.array([f.onset for f in self.fixations])

    def durations(self) -> np.ndarray:
        return np.array([f.duration for f in self.fixations])


@dataclass
class Dataset:
    """A window plus the fixation sequences recorded on it."""

    window: Window
    sequences: list[FixationSequence]
    trial_length: float = DEFAULT_TRIAL_LENGTH_MS

    def subjects(self) -> list[str]:
        seen = []
        for s in self.sequences:
            if s.subject_id not in seen:
                seen.append(s.subject_id)
        return seen

    def painting_ids(self) -> list[str]:
        seen = []
        for s in self.sequences:
            if s.painting_id not in seen:
                seen.append(s.painting_id)
        return seen

    def by_group(self, group: str) -> list[FixationSequence]:
        if group not in GROUPS:
            raise DataError(f"unknown group {group!r}")
        return [s for s in self.sequences if s.group == group]

    def pooled_locations(self, group: str | None = None) -> np.ndarray:
        seqs = self.sequences if group is None else self.by_group(group)
        arrays = [s.locations() for s in seqs if len(s)]
        if not arrays:
            return np.empty((0, 2))
        return np.vstack(arrays)


@dataclass
class StepCurve:
    """Right-continuous piecewise-constant function of time on [0, domain_end].

    ``values[i]`` holds on [knots[i], knots[i+1]); evaluation exactly at a
    knot returns the post-jump value. Before the first knot the curve is
    undefined; constructors in this package always emit a knot at t=0.
    """

    knots: np.ndarray
    values: np.ndarray
    domain_end: float

    def __post_init__(self):
        self.knots = np.asarray(self.knots, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.knots.shape != self.values.shape:
            raise DataError("knots and values must have equal length")
        if self.knots.size and np.any(np.diff(self.knots) <= 0):
            raise DataError("knots must be strictly increasing")

    def __call__(self, t) -> np.ndarray:
        """Evaluate at time(s) t; NaN before the first knot."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.knots, t, side="right") - 1
        out = np.where(idx >= 0, self.values[np.clip(idx, 0, None)], np.nan)
        return out if out.ndim else float(out)


def quadrant_of(x: float, y: float, w: Window) -> int:
    """Quadrant index of a point: 1 upper-left, 2 upper-right, 3 lower-left,
    4 lower-right, split at the window midlines.

    Image convention: upper means smaller y. A point exactly on a midline
    belongs to the larger-index side.
    """
    if not w.contains(x, y):
        raise DataError(f"point ({x}, {y}) outside window")
    mx = (w.x_min + w.x_max) / 2.0
    my = (w.y_min + w.y_max) / 2.0
    right = x >= mx
    lower = y >= my
    return 1 + int(right) + 2 * int(lower)


def max_corner_distance(x: float, y: float, w: Window) -> float:
    """Distance from a point to the furthest window corner.

    This is the longest jump the gaze can take from (x, y) without leaving
    the window, and the truncation point for saccade-length sampling.
    """
    if not w.contains(x, y):
        raise DataError(f"point ({x}, {y}) outside window")
    dx = max(x - w.x_min, w.x_max - x)
    dy = max(y - w.y_min, w.y_max - y)
    return math.hypot(dx, dy)


def farthest_corner(x: float, y: float, w: Window) -> tuple[float, float]:
    """The corner achieving :func:`max_corner_distance`."""
    cx = w.x_min if (x - w.x_min) > (w.x_max - x) else w.x_max
    cy = w.y_min if (y - w.y_min) > (w.y_max - y) else w.y_max
    return cx, cy
