"""Synthetic cabin-camera frames.

Occupants are filled ellipses inscribed at 60% of their seat ROI, drawn on
a flat cabin background; additive Gaussian noise is applied last. With a
zero noise sigma the output is exact, which end-to-end tests rely on.
"""

from __future__ import annotations

import numpy as np

from ..vision import Frame, SeatMap
from .scenario import LightingPreset

OCCUPANT_AXIS_FRACTION = 0.6


def ellipse_mask(width: int, height: int, roi_x: int, roi_y: int, roi_w: int, roi_h: int) -> np.ndarray:
    """Boolean (height, width) mask of the occupant ellipse for one ROI.

    A pixel belongs to the ellipse when its center (x+0.5, y+0.5) lies
    inside it.
    """
    cx = roi_x + roi_w / 2.0
    cy = roi_y + roi_h / 2.0
    a = (roi_w * OCCUPANT_AXIS_FRACTION) / 2.0
    b = (roi_h * OCCUPANT_AXIS_FRACTION) / 2.0
    ys, xs = np.mgrid[0:height, 0:width]
    u = (xs + 0.5 - cx) / a
    v = (ys + 0.5 - cy) / b
    return u * u + v * v <= 1.0


def render_cabin_frame(
    occupied_flags,
    seat_map: SeatMap,
    lighting: LightingPreset,
    noise_sigma: float,
    rng: np.random.Generator,
    width: int = 320,
    height: int = 240,
    timestamp: int = 0,
) -> Frame:
    """Draw the cabin with the given per-seat occupancy.

    The rng is always consumed for the noise field (even at sigma 0) so
    day/night renders of the same scenario stay draw-for-draw aligned.
    """
    seat_map.check_frame_bounds(width, height)
    img = np.full((height, width), float(lighting.background), dtype=np.float64)
    for flag, roi in zip(occupied_flags, seat_map.rois):
        if flag:
            patch = img[roi.y : roi.y + roi.h, roi.x : roi.x + roi.w]
            local = ellipse_mask(roi.w, roi.h, 0, 0, roi.w, roi.h)
            patch[local] = float(lighting.occupant)
    sigma = noise_sigma * lighting.noise_scale
    img += rng.normal(0.0, 1.0, size=img.shape) * sigma
    pixels = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    return Frame(pixels=pixels, timestamp=timestamp)
