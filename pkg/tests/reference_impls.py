"""Independent reference implementations used as test oracles.

These are deliberately written in plain scalar Python, structured
differently from the production code, so agreement between the two is
meaningful.
"""

from __future__ import annotations

import math
from collections import deque


class ScalarPixelMixture:
    """Single-pixel Gaussian-mixture background model.

    Mirrors the documented update rule step by step on Python floats:
    rank by weight/sigma (ties by index), background set = ranked prefix
    whose running cumulative weight is below the threshold, match within
    match_sigma standard deviations, adapt best-ranked match or replace the
    lowest-weight Gaussian, then renormalize left to right.
    """

    def __init__(self, value, config):
        self.cfg = config
        k = config.num_gaussians
        self.means = [0.0] * k
        self.variances = [config.initial_variance] * k
        self.weights = [0.0] * k
        self.means[0] = float(value)
        self.weights[0] = 1.0

    def update(self, value):
        cfg = self.cfg
        k = cfg.num_gaussians
        alpha = cfg.learning_rate
        x = float(value)

        sigma = [math.sqrt(v) for v in self.variances]
        rank_key = [w / s for w, s in zip(self.weights, sigma)]
        order = sorted(range(k), key=lambda i: -rank_key[i])

        in_bg = [False] * k
        cum = 0.0
        for idx in order:
            in_bg[idx] = cum < cfg.background_threshold
            cum += self.weights[idx]

        matched = [
            self.weights[i] > 0.0
            and (x - self.means[i]) ** 2 <= (cfg.match_sigma * cfg.match_sigma) * self.variances[i]
            for i in range(k)
        ]

        foreground = not any(m and b for m, b in zip(matched, in_bg))

        hit = None
        for idx in order:  # first match in rank order
            if matched[idx]:
                hit = idx
                break

        if hit is not None:
            self.weights = [(1.0 - alpha) * w for w in self.weights]
            self.weights[hit] += alpha
            delta = x - self.means[hit]
            self.means[hit] = self.means[hit] + alpha * delta
            d2 = x - self.means[hit]
            v = (1.0 - alpha) * self.variances[hit] + alpha * (d2 * d2)
            self.variances[hit] = max(v, cfg.variance_floor)
        else:
            lowest = min(range(k), key=lambda i: (self.weights[i], i))
            self.means[lowest] = x
            self.variances[lowest] = cfg.initial_variance
            self.weights[lowest] = cfg.new_gaussian_weight

        total = self.weights[0]
        for i in range(1, k):
            total += self.weights[i]
        self.weights = [w / total for w in self.weights]
        return foreground


def flood_fill_components(bits, min_area):
    """Brute-force 8-connected component finder over a boolean 2-D array.

    Returns a list of dicts {pixel_count, x, y, w, h, centroid} sorted the
    same way the production extractor orders blobs.
    """
    height = len(bits)
    width = len(bits[0]) if height else 0
    seen = [[False] * width for _ in range(height)]
    comps = []
    for sy in range(height):
        for sx in range(width):
            if not bits[sy][sx] or seen[sy][sx]:
                continue
            queue = deque([(sy, sx)])
            seen[sy][sx] = True
            pixels = []
            while queue:
                y, x = queue.popleft()
                pixels.append((y, x))
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < height and 0 <= nx < width:
                            if bits[ny][nx] and not seen[ny][nx]:
                                seen[ny][nx] = True
                                queue.append((ny, nx))
            if len(pixels) < min_area:
                continue
            ys = [p[0] for p in pixels]
            xs = [p[1] for p in pixels]
            n = len(pixels)
            comps.append(
                {
                    "pixel_count": n,
                    "x": min(xs),
                    "y": min(ys),
                    "w": max(xs) - min(xs) + 1,
                    "h": max(ys) - min(ys) + 1,
                    "centroid": (sum(xs) / n, sum(ys) / n),
                }
            )
    comps.sort(
        key=lambda c: (c["y"], c["x"], c["h"], c["w"], c["pixel_count"], c["centroid"])
    )
    return comps


def law_of_cosines_distance(lat1, lon1, lat2, lon2, radius):
    """Spherical law of cosines, an alternative great-circle formula."""
    p1, l1, p2, l2 = map(math.radians, (lat1, lon1, lat2, lon2))
    arg = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(l2 - l1)
    return radius * math.acos(max(-1.0, min(1.0, arg)))


def ellipse_pixel_count(x, y, w, h, axis_fraction=0.6):
    """Count pixel centers inside the ellipse inscribed at ``axis_fraction``
    of an ROI's dimensions, by exhaustive scan."""
    cx = x + w / 2.0
    cy = y + h / 2.0
    a = (w * axis_fraction) / 2.0
    b = (h * axis_fraction) / 2.0
    count = 0
    for py in range(y, y + h):
        for px in range(x, x + w):
            u = (px + 0.5 - cx) / a
            v = (py + 0.5 - cy) / b
            if u * u + v * v <= 1.0:
                count += 1
    return count
