"""Detection-rate metric and scenario evaluation reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import ShapeError, UndefinedRateError
from .background import MixtureConfig, init_background, update_background
from .blobs import extract_blobs
from .frame import Frame
from .seats import SeatMap, SeatOccupancy, assign_blobs_to_seats

CSV_HEADER = ["actual", "detected", "missed", "percentage"]


def detection_rate(actual: int, detected: int) -> int:
    """Integer percentage of ground-truth occupants that were detected,
    truncated toward zero (98.7 -> 98)."""
    if actual == 0:
        raise UndefinedRateError("detection rate undefined for zero actual occupants")
    if actual < 0 or detected < 0:
        raise ValueError("counts must be non-negative")
    return (100 * detected) // actual


@dataclass(frozen=True)
class ReportRow:
    """One evaluation row. ``detected`` is capped at ``actual``; spurious
    extra detections are carried in ``false_positives`` instead of
    producing a negative miss count."""

    actual: int
    detected: int
    missed: int
    percentage: int
    false_positives: int = 0

    @classmethod
    def from_counts(cls, actual: int, detected: int) -> "ReportRow":
        capped = min(detected, actual)
        return cls(
            actual=actual,
            detected=capped,
            missed=actual - capped,
            percentage=detection_rate(actual, capped),
            false_positives=max(0, detected - actual),
        )


@dataclass(frozen=True)
class DetectionReport:
    rows: tuple[ReportRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    @classmethod
    def from_counts(cls, pairs: Iterable[tuple[int, int]]) -> "DetectionReport":
        return cls(rows=tuple(ReportRow.from_counts(a, d) for a, d in pairs))

    @property
    def percentages(self) -> tuple[int, ...]:
        return tuple(r.percentage for r in self.rows)

    def mean_percentage(self) -> float:
        if not self.rows:
            raise UndefinedRateError("report has no rows")
        return sum(r.percentage for r in self.rows) / len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([r.actual, r.detected, r.missed, r.percentage])
        return buf.getvalue()

    def save_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, path: str | Path) -> "DetectionReport":
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            rows = tuple(
                ReportRow(
                    actual=int(r["actual"]),
                    detected=int(r["detected"]),
                    missed=int(r["missed"]),
                    percentage=int(r["percentage"]),
                )
                for r in reader
            )
        return cls(rows=rows)


def evaluate_scenario(
    frames: Sequence[Frame],
    truth: Sequence[SeatOccupancy],
    seat_map: SeatMap,
    config: MixtureConfig = MixtureConfig(),
    min_area: int = 30,
) -> DetectionReport:
    """Run the full pipeline over a frame sequence and score it against
    ground truth.

    Frame 0 seeds the background model (scenarios start with an empty
    cabin); every later frame goes through update -> blobs -> seat
    assignment. Frames whose ground truth has no occupants produce no row.
    """
    if len(frames) != len(truth):
        raise ShapeError(f"{len(frames)} frames but {len(truth)} truth entries")
    if not frames:
        return DetectionReport(rows=())
    first = frames[0]
    for f in frames[1:]:
        if (f.width, f.height) != (first.width, first.height):
            raise ShapeError("frames have mixed dimensions")
    seat_map.check_frame_bounds(first.width, first.height)

    model = init_background(first, config)
    rows = []
    for frame, truth_occ in zip(frames[1:], truth[1:]):
        mask = update_background(model, frame)
        blobs = extract_blobs(mask, min_area=min_area)
        detected = assign_blobs_to_seats(blobs, seat_map)
        if truth_occ.occupied == 0:
            continue
        rows.append(ReportRow.from_counts(truth_occ.occupied, detected.occupied))
    return DetectionReport(rows=tuple(rows))
