"""Seat regions of a cabin frame and per-frame occupancy state."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import ShapeError
from .blobs import Blob


@dataclass(frozen=True)
class SeatRoi:
    """Rectangular frame region belonging to one seat (pixel units)."""

    seat_id: str
    x: int
    y: int
    w: int
    h: int

    def contains(self, px: float, py: float) -> bool:
        # Half-open: the right/bottom edges belong to the next region.
        return self.x <= px < self.x + self.w and self.y <= py < self.y + self.h

    def overlaps(self, other: "SeatRoi") -> bool:
        return (
            self.x < other.x + other.w
            and other.x < self.x + self.w
            and self.y < other.y + other.h
            and other.y < self.y + self.h
        )


@dataclass(frozen=True)
class SeatMap:
    """Static seat layout for one bus model."""

    bus_model_id: str
    total_seats: int
    rois: tuple[SeatRoi, ...]

    def __post_init__(self):
        object.__setattr__(self, "rois", tuple(self.rois))
        if len(self.rois) != self.total_seats:
            raise ValueError(
                f"seat map declares {self.total_seats} seats but has {len(self.rois)} ROIs"
            )
        seen = set()
        for roi in self.rois:
            if roi.w < 1 or roi.h < 1 or roi.x < 0 or roi.y < 0:
                raise ValueError(f"ROI {roi.seat_id}: degenerate rectangle")
            if roi.seat_id in seen:
                raise ValueError(f"duplicate seat_id {roi.seat_id!r}")
            seen.add(roi.seat_id)
        for i, a in enumerate(self.rois):
            for b in self.rois[i + 1 :]:
                if a.overlaps(b):
                    raise ValueError(f"ROIs {a.seat_id!r} and {b.seat_id!r} overlap")

    def check_frame_bounds(self, width: int, height: int) -> None:
        for roi in self.rois:
            if roi.x + roi.w > width or roi.y + roi.h > height:
                raise ShapeError(
                    f"ROI {roi.seat_id} exceeds {width}x{height} frame bounds"
                )

    def to_dict(self) -> dict:
        return {
            "bus_model_id": self.bus_model_id,
            "total_seats": self.total_seats,
            "rois": [
                {"seat_id": r.seat_id, "x": r.x, "y": r.y, "w": r.w, "h": r.h}
                for r in self.rois
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SeatMap":
        rois = tuple(
            SeatRoi(seat_id=str(r["seat_id"]), x=int(r["x"]), y=int(r["y"]), w=int(r["w"]), h=int(r["h"]))
            for r in data["rois"]
        )
        return cls(bus_model_id=str(data["bus_model_id"]), total_seats=int(data["total_seats"]), rois=rois)


def load_seat_map(path: str | Path) -> SeatMap:
    return SeatMap.from_dict(json.loads(Path(path).read_text()))


def save_seat_map(path: str | Path, seat_map: SeatMap) -> None:
    Path(path).write_text(json.dumps(seat_map.to_dict(), indent=2) + "\n")


def make_grid_seat_map(
    bus_model_id: str = "standard-60",
    total_seats: int = 60,
    cols: int = 6,
    frame_width: int = 320,
    frame_height: int = 240,
    inset: float = 0.25,
) -> SeatMap:
    """Author a seat map as a uniform grid filling the frame.

    Each grid cell is shrunk by ``inset`` (fraction of the cell kept as
    spacing) so ROIs stay pairwise disjoint and rendered occupants never
    bleed across seats.
    """
    rows = (total_seats + cols - 1) // cols
    cell_w = frame_width // cols
    cell_h = frame_height // rows
    roi_w = max(1, int(cell_w * (1 - inset)))
    roi_h = max(1, int(cell_h * (1 - inset)))
    pad_x = (cell_w - roi_w) // 2
    pad_y = (cell_h - roi_h) // 2
    rois = []
    for i in range(total_seats):
        r, c = divmod(i, cols)
        rois.append(
            SeatRoi(
                seat_id=f"s{i:02d}",
                x=c * cell_w + pad_x,
                y=r * cell_h + pad_y,
                w=roi_w,
                h=roi_h,
            )
        )
    return SeatMap(bus_model_id=bus_model_id, total_seats=total_seats, rois=tuple(rois))


@dataclass(frozen=True)
class SeatOccupancy:
    """Per-seat occupied flags; counts are derived so that
    occupied + empty == total always holds."""

    flags: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "flags", tuple(bool(f) for f in self.flags))

    @property
    def total(self) -> int:
        return len(self.flags)

    @property
    def occupied(self) -> int:
        return sum(self.flags)

    @property
    def empty(self) -> int:
        return self.total - self.occupied


def assign_blobs_to_seats(blobs: list[Blob], seat_map: SeatMap) -> SeatOccupancy:
    """A seat is occupied when at least one blob centroid falls inside its
    ROI; blobs outside every ROI are ignored."""
    flags = []
    for roi in seat_map.rois:
        flags.append(any(roi.contains(b.centroid[0], b.centroid[1]) for b in blobs))
    return SeatOccupancy(flags=tuple(flags))


def count_availability(occupancy: SeatOccupancy) -> tuple[int, int, int]:
    """(occupied, empty, total) - empty seats are what remain after the
    detected occupants are subtracted from the seat total."""
    return occupancy.occupied, occupancy.empty, occupancy.total
