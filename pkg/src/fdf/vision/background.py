"""Per-pixel adaptive Gaussian-mixture background model.

Each pixel carries K Gaussians (mean, variance, weight). A new pixel value
is matched against them, the matched Gaussian is adapted, and the pixel is
classified foreground when it matches none of the high-confidence
("background set") Gaussians. All arithmetic is float64 and deterministic:
the same frame sequence always yields bit-identical masks and model state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, ShapeError
from .frame import ForegroundMask, Frame


@dataclass(frozen=True)
class MixtureConfig:
    """Tuning knobs for the mixture model.

    ``background_threshold`` is the cumulative-weight cutoff selecting which
    Gaussians count as background; ``match_sigma`` is the match distance in
    standard deviations.
    """

    num_gaussians: int = 3
    learning_rate: float = 0.02
    background_threshold: float = 0.7
    match_sigma: float = 2.5
    initial_variance: float = 225.0
    variance_floor: float = 25.0
    new_gaussian_weight: float = 0.05

    def validate(self) -> None:
        if self.num_gaussians < 1:
            raise ConfigError(f"num_gaussians must be >= 1, got {self.num_gaussians}")
        if not 0.0 < self.learning_rate < 1.0:
            raise ConfigError(f"learning_rate must be in (0, 1), got {self.learning_rate}")
        if not 0.0 < self.background_threshold <= 1.0:
            raise ConfigError(
                f"background_threshold must be in (0, 1], got {self.background_threshold}"
            )
        if self.match_sigma <= 0.0:
            raise ConfigError(f"match_sigma must be positive, got {self.match_sigma}")
        if self.variance_floor <= 0.0:
            raise ConfigError(f"variance_floor must be positive, got {self.variance_floor}")
        if self.initial_variance < self.variance_floor:
            raise ConfigError("initial_variance must be >= variance_floor")
        if not 0.0 < self.new_gaussian_weight <= 1.0:
            raise ConfigError(
                f"new_gaussian_weight must be in (0, 1], got {self.new_gaussian_weight}"
            )


class BackgroundModel:
    """Mutable mixture state for one camera stream.

    Arrays are shaped (height, width, K). Updates are strictly sequential
    per stream; distinct streams are independent.
    """

    def __init__(self, height: int, width: int, config: MixtureConfig):
        config.validate()
        self.config = config
        self.height = height
        self.width = width
        k = config.num_gaussians
        self.means = np.zeros((height, width, k), dtype=np.float64)
        self.variances = np.full((height, width, k), config.initial_variance, dtype=np.float64)
        self.weights = np.zeros((height, width, k), dtype=np.float64)


def init_background(frame: Frame, config: MixtureConfig) -> BackgroundModel:
    """Seed a model from one frame: Gaussian 0 takes the pixel value with
    full weight, the remaining K-1 Gaussians start with weight 0."""
    model = BackgroundModel(frame.height, frame.width, config)
    model.means[:, :, 0] = frame.pixels.astype(np.float64)
    model.weights[:, :, 0] = 1.0
    return model


def update_background(model: BackgroundModel, frame: Frame) -> ForegroundMask:
    """Classify one frame against the model and adapt the model in place.

    Per pixel: Gaussians are ranked by weight/sigma; the background set is
    the ranked prefix whose preceding cumulative weight is below the
    background threshold. A value matches a Gaussian when it lies within
    ``match_sigma`` standard deviations (zero-weight slots never match).
    The best-ranked matched Gaussian is adapted with the learning rate;
    with no match the lowest-weight Gaussian is replaced by a fresh one
    centred on the value. Weights are renormalized to sum to 1 either way.
    """
    if (frame.height, frame.width) != (model.height, model.width):
        raise ShapeError(
            f"frame is {frame.width}x{frame.height}, model is {model.width}x{model.height}"
        )
    cfg = model.config
    k = cfg.num_gaussians
    alpha = cfg.learning_rate

    x = frame.pixels.astype(np.float64)[:, :, None]  # (h, w, 1)
    means, variances, weights = model.means, model.variances, model.weights

    sigma = np.sqrt(variances)
    rank_key = weights / sigma
    # Stable argsort on the negated key: descending by key, ties by index.
    order = np.argsort(-rank_key, axis=2, kind="stable")
    rank_pos = np.empty_like(order)
    np.put_along_axis(rank_pos, order, np.arange(k, dtype=order.dtype)[None, None, :], axis=2)

    # Background set: ranked Gaussians whose exclusive cumulative weight is
    # still below the threshold (the one crossing it is included).
    sorted_w = np.take_along_axis(weights, order, axis=2)
    cum_excl = np.concatenate(
        [np.zeros_like(sorted_w[:, :, :1]), np.cumsum(sorted_w, axis=2)[:, :, :-1]], axis=2
    )
    in_bg_sorted = cum_excl < cfg.background_threshold
    in_bg = np.empty_like(in_bg_sorted)
    np.put_along_axis(in_bg, order, in_bg_sorted, axis=2)

    diff = x - means
    matched = (weights > 0.0) & (diff * diff <= (cfg.match_sigma * cfg.match_sigma) * variances)

    foreground = ~np.any(matched & in_bg, axis=2)

    # Best-ranked match per pixel (sentinel k = no match).
    match_rank = np.where(matched, rank_pos, k)
    best = np.argmin(match_rank, axis=2)  # (h, w)
    has_match = np.take_along_axis(match_rank, best[:, :, None], axis=2)[:, :, 0] < k

    hit = np.zeros((model.height, model.width, k), dtype=bool)
    np.put_along_axis(hit, best[:, :, None], has_match[:, :, None], axis=2)

    # Matched branch: decay all weights, boost the hit one, adapt its
    # mean/variance with the learning rate (variance uses the new mean).
    w_matched = (1.0 - alpha) * weights
    w_matched = np.where(hit, w_matched + alpha, w_matched)
    m_new = np.where(hit, means + alpha * diff, means)
    delta2 = x - m_new
    v_new = np.where(hit, (1.0 - alpha) * variances + alpha * (delta2 * delta2), variances)
    v_new = np.where(hit, np.maximum(v_new, cfg.variance_floor), v_new)

    # No-match branch: replace the lowest-weight Gaussian (first index on
    # ties) with a fresh one centred on the value.
    lowest = np.argmin(weights, axis=2)
    replace = np.zeros_like(hit)
    np.put_along_axis(replace, lowest[:, :, None], ~has_match[:, :, None], axis=2)
    w_final = np.where(replace, cfg.new_gaussian_weight, np.where(has_match[:, :, None], w_matched, weights))
    m_final = np.where(replace, x, m_new)
    v_final = np.where(replace, cfg.initial_variance, v_new)

    # Renormalize with a fixed left-to-right summation order so the result
    # is bit-identical to a scalar implementation.
    total = w_final[:, :, 0].copy()
    for i in range(1, k):
        total += w_final[:, :, i]
    w_final = w_final / total[:, :, None]

    model.means = m_final
    model.variances = v_final
    model.weights = w_final
    return ForegroundMask(bits=foreground)
