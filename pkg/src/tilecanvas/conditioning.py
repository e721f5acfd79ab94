"""Per-window denoiser inputs: the 9-channel latent stack and the token bundle.

The layout provider here is a deterministic pooling stand-in for a learned
layout encoder. It keeps the same interface (anchor video in, a fixed number
of ``d_token``-wide tokens out) so the conditioning path is exercised end to
end without weights.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .embedding import D_TOKEN, RREVector
from .errors import InvalidInputError, NumericError, ShapeError
from .geometry import Rect

LAYOUT_GRID = (8, 8)
LIFT_SEED = 1337


def as_volume(values, name: str = "volume") -> np.ndarray:
    """Validate a ``(F, C, H, W)`` latent volume and return it as float32."""
    arr = np.asarray(values)
    if arr.ndim != 4:
        raise ShapeError(f"{name} must be 4-D (F, C, H, W), got shape {arr.shape}")
    if arr.shape[0] < 1 or min(arr.shape) < 1:
        raise ShapeError(f"{name} has an empty axis: {arr.shape}")
    arr = np.ascontiguousarray(arr, dtype=np.float32)
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{name} contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class ModelInput:
    noisy: np.ndarray  # (F, C, h, w)
    masked: np.ndarray  # (F, C, h, w), zero on unknown cells
    mask: np.ndarray  # (F, 1, h, w), 1 on unknown cells

    @property
    def channels(self) -> int:
        return self.noisy.shape[1] + self.masked.shape[1] + self.mask.shape[1]

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.noisy, self.masked, self.mask], axis=1)


def assemble_model_input(
    window: Rect, canvas_latent: np.ndarray, known_mask: np.ndarray, known_latent: np.ndarray
) -> ModelInput:
    """Slice ``window`` out of the noisy canvas and attach masked known content.

    ``known_mask`` is a 2-D grid over the canvas, 1 where content must be
    generated and 0 where ``known_latent`` holds real content.
    """
    F, C, H, W = canvas_latent.shape
    if window.x < 0 or window.y < 0 or window.x1 > W or window.y1 > H:
        raise ShapeError(f"window {window} outside latent canvas {W}x{H}")
    if known_mask.shape != (H, W):
        raise ShapeError(f"mask shape {known_mask.shape} != canvas {(H, W)}")
    if known_latent.shape != canvas_latent.shape:
        raise ShapeError(f"known latent {known_latent.shape} != canvas {canvas_latent.shape}")
    rows, cols = window.slices()
    noisy = canvas_latent[:, :, rows, cols]
    m = known_mask[rows, cols].astype(np.float32)
    keep = (1.0 - m)[None, None]
    masked = (keep * known_latent[:, :, rows, cols]).astype(np.float32)
    mask = np.broadcast_to(m[None, None], (F, 1, window.h, window.w)).copy()
    return ModelInput(noisy=noisy, masked=masked, mask=mask)


def default_lift(channels: int, d_token: int = D_TOKEN, seed: int = LIFT_SEED) -> np.ndarray:
    rng = np.random.default_rng([seed, channels])
    return rng.standard_normal((d_token, channels)) / np.sqrt(channels)


def _edges(n: int, parts: int) -> np.ndarray:
    return np.round(np.linspace(0, n, parts + 1)).astype(int)


def layout_tokens(
    anchor_content: np.ndarray,
    grid: tuple[int, int] = LAYOUT_GRID,
    lift: np.ndarray | None = None,
) -> np.ndarray:
    """Pool the anchor over frames and a ``gh`` x ``gw`` grid, lift each cell to a token.

    Returns ``(gh * gw, d_token)`` tokens; token ``k`` is grid cell ``k`` in
    row-major order.
    """
    gh, gw = grid
    if gh < 1 or gw < 1:
        raise InvalidInputError(f"layout grid must be at least 1x1, got {grid}")
    a = np.asarray(anchor_content, dtype=np.float64)
    if a.ndim != 4 or a.size == 0:
        raise InvalidInputError(f"anchor content must be a non-empty (F, C, H, W) volume, got {a.shape}")
    F, C, H, W = a.shape
    if H < gh or W < gw:
        raise InvalidInputError(f"anchor {H}x{W} too small for a {gh}x{gw} layout grid")
    if lift is None:
        lift = default_lift(C)
    if lift.shape[1] != C:
        raise ShapeError(f"lift expects {lift.shape[1]} channels, anchor has {C}")
    frame_mean = a.mean(axis=0)  # (C, H, W)
    ye, xe = _edges(H, gh), _edges(W, gw)
    cells = np.empty((gh * gw, C), dtype=np.float64)
    for i in range(gh):
        for j in range(gw):
            cells[i * gw + j] = frame_mean[:, ye[i] : ye[i + 1], xe[j] : xe[j + 1]].mean(axis=(1, 2))
    return cells @ lift.T


@dataclass(frozen=True)
class ConditioningBundle:
    layout_tokens: np.ndarray  # (L, d_token), RRE already added
    rre_token: np.ndarray  # (1, d_token)
    text_tokens: Any = None
    _digest: str = field(default="", repr=False, compare=False)

    @property
    def d_token(self) -> int:
        return self.layout_tokens.shape[1]

    def digest(self) -> str:
        """Stable content hash over every token, including opaque text tokens."""
        if self._digest:
            return self._digest
        h = hashlib.sha256()
        for arr in (self.layout_tokens, self.rre_token):
            h.update(np.ascontiguousarray(arr, dtype=np.float64).tobytes())
        t = self.text_tokens
        if isinstance(t, np.ndarray):
            h.update(np.ascontiguousarray(t).tobytes())
        elif t is not None:
            h.update(repr(t).encode())
        digest = h.hexdigest()
        object.__setattr__(self, "_digest", digest)
        return digest


def build_bundle(layout: np.ndarray, rre: RREVector, text: Any = None) -> ConditioningBundle:
    layout = np.asarray(layout, dtype=np.float64)
    token = np.asarray(rre.token, dtype=np.float64).reshape(1, -1)
    if layout.ndim != 2 or layout.shape[1] != token.shape[1]:
        raise ShapeError(f"layout tokens {layout.shape} vs rre token width {token.shape[1]}")
    combined = layout + token
    combined.setflags(write=False)
    token.setflags(write=False)
    return ConditioningBundle(layout_tokens=combined, rre_token=token, text_tokens=text)
