"""Gaussian window weights and the weighted merge of overlapping windows."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .errors import IncompleteCoverError, InvalidConfigError, ShapeError
from .geometry import Rect

WEIGHT_FLOOR = 1e-8


def default_sigma(window_latent_side: int) -> float:
    return window_latent_side / 4.0


def gaussian_weights(h: int, w: int, sigma: float, floor: float = WEIGHT_FLOOR) -> np.ndarray:
    """Center-peaked separable Gaussian over an ``h`` x ``w`` window, float64."""
    if h <= 0 or w <= 0:
        raise InvalidConfigError(f"weight mask needs positive size, got {h}x{w}")
    if not sigma > 0:
        raise InvalidConfigError(f"sigma must be positive, got {sigma}")
    di = np.arange(h, dtype=np.float64) - (h - 1) / 2.0
    dj = np.arange(w, dtype=np.float64) - (w - 1) / 2.0
    r2 = di[:, None] ** 2 + dj[None, :] ** 2
    return np.maximum(np.exp(-r2 / (2.0 * sigma * sigma)), floor)


def merge_windows(
    canvas_shape: Sequence[int],
    windows: Sequence[tuple[Rect, np.ndarray]],
    weights: np.ndarray,
    dtype=np.float32,
) -> np.ndarray:
    """Weighted average of window volumes onto a ``(F, C, H, W)`` canvas.

    Windows are reduced in the order given, so callers that pass them in
    ascending window index get bitwise reproducible output. Every canvas cell
    must be covered by at least one window.
    """
    F, C, H, W = (int(v) for v in canvas_shape)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    num = np.zeros((F, C, H, W), dtype=np.float64)
    den = np.zeros((H, W), dtype=np.float64)
    for k, (rect, vol) in enumerate(windows):
        if vol.shape != (F, C, rect.h, rect.w):
            raise ShapeError(f"window {k}: volume {vol.shape} does not match rect {rect}")
        if weights.shape != (rect.h, rect.w):
            raise ShapeError(f"window {k}: weights {weights.shape} do not match rect {rect}")
        if rect.x < 0 or rect.y < 0 or rect.x1 > W or rect.y1 > H:
            raise ShapeError(f"window {k}: {rect} outside canvas {W}x{H}")
        vol = np.ascontiguousarray(vol, dtype=np.float32)
        kernels.accumulate_window(num, den, vol, weights, rect.y, rect.x)
    if not np.all(den > 0):
        missing = int(np.count_nonzero(den == 0))
        raise IncompleteCoverError(f"{missing} canvas cells are not covered by any window")
    out = np.empty((F, C, H, W), dtype=np.float32)
    kernels.normalize(num, den, out)
    return out.astype(dtype, copy=False)


def normalized_contributions(
    canvas_hw: tuple[int, int], rects: Sequence[Rect], weights: np.ndarray
) -> np.ndarray:
    """Per-window normalized weight maps, shape ``(K, H, W)``; they sum to 1 where covered."""
    H, W = canvas_hw
    maps = np.zeros((len(rects), H, W), dtype=np.float64)
    for k, r in enumerate(rects):
        rows, cols = r.slices()
        maps[k, rows, cols] = weights
    total = maps.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(total > 0, maps / total, 0.0)
