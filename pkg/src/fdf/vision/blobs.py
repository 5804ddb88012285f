"""Connected-component blob extraction from foreground masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .frame import ForegroundMask

# 8-connectivity: diagonal neighbours belong to the same component.
_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class BoundingBox:
    x: int
    y: int
    w: int
    h: int


@dataclass(frozen=True)
class Blob:
    """One foreground component: size, extent and centroid (fractional px)."""

    pixel_count: int
    bounding_box: BoundingBox
    centroid: tuple[float, float]  # (x, y)

    def sort_key(self):
        b = self.bounding_box
        return (b.y, b.x, b.h, b.w, self.pixel_count, self.centroid)


def extract_blobs(mask: ForegroundMask, min_area: int = 30) -> list[Blob]:
    """8-connected components with at least ``min_area`` pixels, ordered by
    bounding-box top-left (y, then x)."""
    if min_area < 1:
        raise ValueError(f"min_area must be >= 1, got {min_area}")
    labels, count = ndimage.label(mask.bits, structure=_EIGHT_CONNECTED)
    if count == 0:
        return []

    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    boxes = ndimage.find_objects(labels)
    ys, xs = np.nonzero(labels)
    lab = labels[ys, xs]
    # Integer coordinate sums are exact in float64, so centroids are
    # reproducible regardless of pixel visit order.
    sum_x = np.bincount(lab, weights=xs, minlength=count + 1)
    sum_y = np.bincount(lab, weights=ys, minlength=count + 1)

    blobs = []
    for i in range(1, count + 1):
        n = int(sizes[i])
        if n < min_area:
            continue
        sl_y, sl_x = boxes[i - 1]
        box = BoundingBox(
            x=int(sl_x.start),
            y=int(sl_y.start),
            w=int(sl_x.stop - sl_x.start),
            h=int(sl_y.stop - sl_y.start),
        )
        blobs.append(
            Blob(pixel_count=n, bounding_box=box, centroid=(sum_x[i] / n, sum_y[i] / n))
        )
    blobs.sort(key=Blob.sort_key)
    return blobs
