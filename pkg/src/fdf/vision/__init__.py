"""Cabin-camera occupancy detection: adaptive background subtraction,
blob extraction, seat assignment and detection-rate reporting."""

from .background import BackgroundModel, MixtureConfig, init_background, update_background
from .blobs import Blob, BoundingBox, extract_blobs
from .frame import (
    Frame,
    ForegroundMask,
    frame_filename,
    parse_frame_filename,
    read_pgm,
    write_pgm,
)
from .metrics import DetectionReport, ReportRow, detection_rate, evaluate_scenario
from .seats import (
    SeatMap,
    SeatOccupancy,
    SeatRoi,
    assign_blobs_to_seats,
    count_availability,
    load_seat_map,
    make_grid_seat_map,
    save_seat_map,
)

__all__ = [
    "BackgroundModel",
    "MixtureConfig",
    "init_background",
    "update_background",
    "Blob",
    "BoundingBox",
    "extract_blobs",
    "Frame",
    "ForegroundMask",
    "frame_filename",
    "parse_frame_filename",
    "read_pgm",
    "write_pgm",
    "DetectionReport",
    "ReportRow",
    "detection_rate",
    "evaluate_scenario",
    "SeatMap",
    "SeatOccupancy",
    "SeatRoi",
    "assign_blobs_to_seats",
    "count_availability",
    "load_seat_map",
    "make_grid_seat_map",
    "save_seat_map",
]
