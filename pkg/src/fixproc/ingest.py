"""Reading fixation-event CSV files and applying the exclusion rules.

Canonical schema (header required):

    subject_id,group,painting_id,onset_ms,duration_ms,x_px,y_px

with group one of ``novice`` / ``non_novice``. Fixations shorter than 40 ms
are treated as spurious and removed, as are fixations outside the painting
extent; a saccade adjacent to any removed fixation does not correspond to a
real eye movement and is flagged invalid rather than spliced.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TRIAL_LENGTH_MS,
    GROUPS,
    MIN_FIXATION_MS,
    REFERENCE_WINDOW,
    DataError,
    Dataset,
    Fixation,
    FixationSequence,
    Saccade,
    Window,
)

COLUMNS = ("subject_id", "group", "painting_id", "onset_ms", "duration_ms", "x_px", "y_px")


@dataclass
class SequenceReport:
    subject_id: str
    painting_id: str
    n_total: int = 0
    n_short_excluded: int = 0
    n_outside_excluded: int = 0
    n_saccades_missing: int = 0
    excluded_indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "painting_id": self.painting_id,
            "n_total": self.n_total,
            "n_short_excluded": self.n_short_excluded,
            "n_outside_excluded": self.n_outside_excluded,
            "n_saccades_missing": self.n_saccades_missing,
            "excluded_indices": list(self.excluded_indices),
        }


@dataclass
class IngestReport:
    """Exclusion bookkeeping, one entry per (subject, painting) sequence."""

    entries: list[SequenceReport] = field(default_factory=list)

    def entry(self, subject_id: str, painting_id: str) -> SequenceReport:
        for e in self.entries:
            if e.subject_id == subject_id and e.painting_id == painting_id:
                return e
        raise KeyError((subject_id, painting_id))

    @property
    def n_total(self) -> int:
        return sum(e.n_total for e in self.entries)

    @property
    def n_short_excluded(self) -> int:
        return sum(e.n_short_excluded for e in self.entries)

    @property
    def n_outside_excluded(self) -> int:
        return sum(e.n_outside_excluded for e in self.entries)

    @property
    def n_saccades_missing(self) -> int:
        return sum(e.n_saccades_missing for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "sequences": [e.to_dict() for e in self.entries],
            "totals": {
                "n_total": self.n_total,
                "n_short_excluded": self.n_short_excluded,
                "n_outside_excluded": self.n_outside_excluded,
                "n_saccades_missing": self.n_saccades_missing,
            },
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def parse_fixations(
    path,
    fmt: str = "csv",
    window: Window = REFERENCE_WINDOW,
    trial_length: float = DEFAULT_TRIAL_LENGTH_MS,
) -> Dataset:
    """Read a fixation CSV into one sequence per (subject, painting).

    Rows may arrive in any time order; each sequence is sorted by onset and
    a warning is emitted when sorting actually changed the order. Duplicate
    onsets within one sequence and malformed rows raise with the offending
    line number.
    """
    if fmt != "csv":
        raise DataError(f"unsupported format {fmt!r}")

    rows: dict[tuple[str, str], list[tuple[float, Fixation]]] = {}
    groups: dict[tuple[str, str], str] = {}
    seen_onsets: dict[tuple[str, str], set[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file, expected header {','.join(COLUMNS)}")
        missing = [c for c in COLUMNS if c not in reader.fieldnames]
        if missing:
            raise DataError(f"{path}: missing columns {missing}")
        for row in reader:
            line = reader.line_num
            try:
                subject = row["subject_id"].strip()
                group = row["group"].strip()
                painting = row["painting_id"].strip()
                onset = float(row["onset_ms"])
                duration = float(row["duration_ms"])
                x = float(row["x_px"])
                y = float(row["y_px"])
            except (TypeError, ValueError, AttributeError) as exc:
                raise DataError(f"{path}:{line}: malformed row ({exc})") from exc
            if group not in GROUPS:
                raise DataError(f"{path}:{line}: unknown group {group!r}")
            if duration <= 0:
                raise DataError(f"{path}:{line}: non-positive duration {duration}")
            key = (subject, painting)
            prior = groups.setdefault(key, group)
            if prior != group:
                raise DataError(f"{path}:{line}: subject {subject!r} has two group labels")
            onsets = seen_onsets.setdefault(key, set())
            if onset in onsets:
                raise DataError(
                    f"{path}:{line}: duplicate onset {onset} for subject {subject!r}"
                )
            onsets.add(onset)
            rows.setdefault(key, []).append((onset, Fixation(x, y, onset, duration)))

    sequences = []
    for key in rows:
        bucket = rows[key]
        onsets = [o for o, _ in bucket]
        if onsets != sorted(onsets):
            warnings.warn(f"fixations for {key} were out of time order; sorted by onset")
            bucket.sort(key=lambda t: t[0])
        sequences.append(
            FixationSequence(key[0], groups[key], key[1], [f for _, f in bucket])
        )
    return Dataset(window=window, sequences=sequences, trial_length=trial_length)


def filter_fixations(
    dataset: Dataset,
    min_dur: float = MIN_FIXATION_MS,
    window: Window | None = None,
) -> tuple[Dataset, IngestReport]:
    """Drop short and out-of-window fixations, counting both classes.

    A fixation failing both rules is counted once, as short. The report
    keeps the original indices of removed fixations so saccade derivation
    can tell real from spliced jumps.
    """
    w = window or dataset.window
    report = IngestReport()
    filtered = []
    for seq in dataset.sequences:
        entry = SequenceReport(seq.subject_id, seq.painting_id, n_total=len(seq))
        kept = []
        for i, f in enumerate(seq.fixations):
            if f.duration < min_dur:
                entry.n_short_excluded += 1
                entry.excluded_indices.append(i)
            elif not w.contains(f.x, f.y):
                entry.n_outside_excluded += 1
                entry.excluded_indices.append(i)
            else:
                kept.append(f)
        report.entries.append(entry)
        filtered.append(FixationSequence(seq.subject_id, seq.group, seq.painting_id, kept))
    return (
        Dataset(window=w, sequences=filtered, trial_length=dataset.trial_length),
        report,
    )


def derive_saccades(seq: FixationSequence, exclusions: set[int] | None = None) -> list[Saccade]:
    """Saccades between consecutive retained fixations.

    ``exclusions`` holds original (pre-filter) indices of removed fixations.
    A pair of retained fixations with anything removed between them gets
    valid=False: the straight jump between them never happened as a single
    saccade. Overlapping fixations (negative gap) raise.
    """
    exclusions = exclusions or set()
    n_orig = len(seq) + len(exclusions)
    if exclusions and (min(exclusions) < 0 or max(exclusions) >= n_orig):
        raise DataError("exclusion indices out of range for the original sequence")
    retained_orig = [i for i in range(n_orig) if i not in exclusions]

    saccades = []
    for k in range(len(seq) - 1):
        a, b = seq.fixations[k], seq.fixations[k + 1]
        gap = b.onset - a.end
        if gap < 0:
            raise DataError(
                f"overlapping fixations at onsets {a.onset} and {b.onset} "
                f"for subject {seq.subject_id!r}"
            )
        saccades.append(
            Saccade(
                from_index=k,
                to_index=k + 1,
                length=float(np.hypot(b.x - a.x, b.y - a.y)),
                duration=float(gap),
                valid=retained_orig[k + 1] == retained_orig[k] + 1,
            )
        )
    return saccades


def ingest_pipeline(
    path,
    min_dur: float = MIN_FIXATION_MS,
    window: Window = REFERENCE_WINDOW,
    trial_length: float = DEFAULT_TRIAL_LENGTH_MS,
) -> tuple[Dataset, dict[tuple[str, str], list[Saccade]], IngestReport]:
    """parse -> filter -> derive saccades, with the report fully filled in."""
    raw = parse_fixations(path, "csv", window, trial_length)
    dataset, report = filter_fixations(raw, min_dur, window)
    saccades = {}
    for seq in dataset.sequences:
        entry = report.entry(seq.subject_id, seq.painting_id)
        sacs = derive_saccades(seq, set(entry.excluded_indices))
        entry.n_saccades_missing = sum(1 for s in sacs if not s.valid)
        saccades[(seq.subject_id, seq.painting_id)] = sacs
    return dataset, saccades, report


def write_fixations(dataset: Dataset, path) -> None:
    """Serialize back to the canonical CSV schema (floats in shortest repr)."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        for seq in dataset.sequences:
            for f in seq.fixations:
                fh.write(
                    f"{seq.subject_id},{seq.group},{seq.painting_id},"
                    f"{float(f.onset)!r},{float(f.duration)!r},{float(f.x)!r},{float(f.y)!r}\n"
                )


def write_saccades(saccades: dict[tuple[str, str], list[Saccade]], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("subject_id,painting_id,from_index,to_index,length_px,duration_ms,valid\n")
        for (subject, painting), sacs in saccades.items():
            for s in sacs:
                fh.write(
                    f"{subject},{painting},{s.from_index},{s.to_index},"
                    f"{float(s.length)!r},{float(s.duration)!r},{int(s.valid)}\n"
                )
