"""Sinusoidal encodings and the relative region embedding (RRE).

The RRE encodes six scalars describing an anchor/target pair, in this fixed
order: anchor height, anchor width, target height, target width, vertical
center offset, horizontal center offset. Offsets are target minus anchor.
Scalars are encoded in pixel units without normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, ShapeError
from .geometry import Rect

D_SIN = 64
D_TOKEN = 768
PROJECTION_SEED = 20240903


def sinusoidal_embed(v: float, d: int) -> np.ndarray:
    if d < 2 or d % 2:
        raise InvalidConfigError(f"embedding width must be even and >= 2, got {d}")
    denom = 10000.0 ** (2.0 * np.arange(d // 2, dtype=np.float64) / d)
    phase = float(v) / denom
    out = np.empty(d, dtype=np.float64)
    out[0::2] = np.sin(phase)
    out[1::2] = np.cos(phase)
    return out


@dataclass(frozen=True)
class RelativeRegion:
    h_anchor: int
    w_anchor: int
    h_target: int
    w_target: int
    h_offset: float
    w_offset: float

    def scalars(self) -> tuple[float, ...]:
        return (
            self.h_anchor,
            self.w_anchor,
            self.h_target,
            self.w_target,
            self.h_offset,
            self.w_offset,
        )


def relative_region(anchor: Rect, target: Rect) -> RelativeRegion:
    ax, ay = anchor.center
    tx, ty = target.center
    return RelativeRegion(anchor.h, anchor.w, target.h, target.w, ty - ay, tx - ax)


@dataclass(frozen=True)
class RREVector:
    raw: np.ndarray
    token: np.ndarray


def default_projection(d_sin: int = D_SIN, d_token: int = D_TOKEN, seed: int = PROJECTION_SEED) -> np.ndarray:
    """Fixed seeded stand-in for the learned FC layer, shape ``(d_token, 6 * d_sin)``."""
    rng = np.random.default_rng(seed)
    fan_in = 6 * d_sin
    return rng.standard_normal((d_token, fan_in)) / np.sqrt(fan_in)


def rre_tokens(rr: RelativeRegion, d_sin: int = D_SIN, proj: np.ndarray | None = None) -> RREVector:
    if proj is None:
        proj = default_projection(d_sin)
    proj = np.asarray(proj, dtype=np.float64)
    if proj.ndim != 2 or proj.shape[1] != 6 * d_sin:
        raise ShapeError(f"projection expects input width {6 * d_sin}, got shape {proj.shape}")
    raw = np.concatenate([sinusoidal_embed(v, d_sin) for v in rr.scalars()])
    return RREVector(raw=raw, token=proj @ raw)
