"""Multi-round outpainting and the training-window sampler."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .blending import default_sigma, gaussian_weights
from .conditioning import LAYOUT_GRID, as_volume, build_bundle, layout_tokens
from .diffusion import CFG_SCALE, INFERENCE_STEPS, TRAIN_STEPS, Denoiser, NoiseSchedule, make_schedule
from .embedding import D_SIN, default_projection, relative_region, rre_tokens
from .errors import InvalidConfigError, InvalidInputError, ShapeError
from .executor import dispatch_step
from .geometry import PlanConfig, Rect, RoundPlan, plan_rounds, rect_overlap

log = logging.getLogger(__name__)

NOISE_STREAM = "noise"
SAMPLER_STREAM = "sampler"


def derive_rng(seed: int, stream: str, *index: int) -> np.random.Generator:
    """Independent generator for a named stream; streams never share state."""
    tag = int.from_bytes(hashlib.sha256(stream.encode()).digest()[:8], "little")
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(tag, *index))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class PipelineConfig:
    plan: PlanConfig
    steps: int = INFERENCE_STEPS
    cfg_scale: float = CFG_SCALE
    seed: int = 0
    codec_factor: int = 1
    sigma: float | None = None  # latent units; None -> window_latent / 4
    repaint_each_step: bool = False
    train_steps: int = TRAIN_STEPS
    layout_grid: tuple[int, int] = LAYOUT_GRID
    d_sin: int = D_SIN
    text_tokens: Any = field(default=None, compare=False)

    def validate(self) -> None:
        if self.steps < 1:
            raise InvalidConfigError(f"steps must be >= 1, got {self.steps}")
        self.plan.validate(self.codec_factor)

    @property
    def window_latent(self) -> int:
        return self.plan.window // self.codec_factor

    def blend_sigma(self) -> float:
        return self.sigma if self.sigma is not None else default_sigma(self.window_latent)

    def schedule(self) -> NoiseSchedule:
        return make_schedule(self.train_steps, self.steps)

    def round_plan(self) -> RoundPlan:
        return plan_rounds(self.plan, self.codec_factor)


def _latent(r: Rect, factor: int) -> Rect:
    return r.scaled_down(factor)


def outpaint(
    source: np.ndarray,
    cfg: PipelineConfig,
    denoiser: Denoiser,
    workers: int = 1,
    projection: np.ndarray | None = None,
) -> np.ndarray:
    """Grow ``source`` (latent, placed at ``cfg.plan.source``) to cover the whole canvas.

    Each round starts from its own seeded noise canvas spanning the round's
    region; windows slice from that shared canvas every step. The round's
    denoised region becomes the next anchor. The source is pasted back
    verbatim at the end.
    """
    cfg.validate()
    f = cfg.codec_factor
    source = as_volume(source, "source")
    src_lat = _latent(cfg.plan.source, f)
    F, C, sh, sw = source.shape
    if (sh, sw) != (src_lat.h, src_lat.w):
        raise ShapeError(f"source volume {sh}x{sw} does not match latent source rect {src_lat}")
    plan = cfg.round_plan()
    schedule = cfg.schedule()
    if projection is None:
        projection = default_projection(cfg.d_sin)

    anchor_rect = cfg.plan.source
    anchor = source
    for i, rnd in enumerate(plan):
        assert rnd.anchor == anchor_rect
        region = rnd.region
        reg_lat = _latent(region, f)
        anc_local = _latent(anchor_rect, f).translate(-reg_lat.x, -reg_lat.y)
        win_local = [_latent(w, f).translate(-reg_lat.x, -reg_lat.y) for w in rnd.windows]
        shape = (F, C, reg_lat.h, reg_lat.w)

        known = np.zeros(shape, dtype=np.float32)
        known_mask = np.ones((reg_lat.h, reg_lat.w), dtype=np.uint8)
        rows, cols = anc_local.slices()
        known[:, :, rows, cols] = anchor
        known_mask[rows, cols] = 0

        noise = derive_rng(cfg.seed, NOISE_STREAM, i).standard_normal(shape).astype(np.float32)
        layout = layout_tokens(anchor, cfg.layout_grid)
        bundles = [
            build_bundle(layout, rre_tokens(relative_region(anchor_rect, w), cfg.d_sin, projection), cfg.text_tokens)
            for w in rnd.windows
        ]
        wl = win_local[0]
        weights = gaussian_weights(wl.h, wl.w, cfg.blend_sigma())

        log.debug("round %d: region %s, %d windows", i, region, len(rnd.windows))
        x = noise
        for t_index in range(len(schedule)):
            x = dispatch_step(
                x,
                win_local,
                denoiser,
                lambda k, _r: bundles[k],
                schedule,
                t_index,
                workers,
                known_latent=known,
                known_mask=known_mask,
                weights=weights,
                cfg_scale=cfg.cfg_scale,
                origin=(reg_lat.x, reg_lat.y),
            )
            if cfg.repaint_each_step:
                _, _, abar_prev = schedule.pair(t_index)
                renoised = np.sqrt(abar_prev) * known[:, :, rows, cols] + np.sqrt(1.0 - abar_prev) * noise[:, :, rows, cols]
                x[:, :, rows, cols] = renoised.astype(np.float32)
        anchor = x
        anchor_rect = region

    out = np.array(anchor, dtype=np.float32, copy=True)
    rows, cols = src_lat.slices()
    out[:, :, rows, cols] = source
    return out


class TrainingWindows(NamedTuple):
    anchor: Rect
    target: Rect
    clamped: bool


@dataclass(frozen=True)
class SamplerConfig:
    anchor_min: int = 512
    anchor_max: int = 1536
    target_side: int = 512
    min_overlap: int = 128

    def validate(self) -> None:
        if not 0 < self.anchor_min <= self.anchor_max:
            raise InvalidConfigError("need 0 < anchor_min <= anchor_max")
        if not 0 < self.min_overlap < self.target_side:
            raise InvalidConfigError("need 0 < min_overlap < target_side")


def _sample_axis(rng: np.random.Generator, extent: int, a: int, t: int, m: int) -> tuple[int, int]:
    """Uniform (anchor_pos, target_pos) pair on one axis with 1-D overlap >= m."""
    ax = np.arange(extent - a + 1)
    lo = np.maximum(ax + m - t, 0)
    hi = np.minimum(ax + a - m, extent - t)
    counts = np.maximum(hi - lo + 1, 0)
    total = int(counts.sum())
    if total == 0:
        raise InvalidInputError(f"no placement with overlap >= {m} on an axis of {extent}")
    pick = int(rng.integers(total))
    i = int(np.searchsorted(np.cumsum(counts), pick, side="right"))
    before = int(counts[:i].sum())
    return int(ax[i]), int(lo[i] + (pick - before))


def sample_training_windows(video_extent: Rect, cfg: SamplerConfig, rng: np.random.Generator) -> TrainingWindows:
    """Draw an anchor/target crop pair for training.

    Anchor height and width are independent uniform integers in
    ``[anchor_min, anchor_max]``, clamped to the extent. Placements are uniform
    over all position pairs meeting the overlap constraint on both axes.
    """
    cfg.validate()
    t = cfg.target_side
    if video_extent.w < t or video_extent.h < t:
        raise InvalidInputError(f"extent {video_extent.w}x{video_extent.h} smaller than target side {t}")
    ah = int(rng.integers(cfg.anchor_min, cfg.anchor_max + 1))
    aw = int(rng.integers(cfg.anchor_min, cfg.anchor_max + 1))
    clamped = ah > video_extent.h or aw > video_extent.w
    ah, aw = min(ah, video_extent.h), min(aw, video_extent.w)
    if clamped:
        log.debug("anchor clamped to %dx%d by extent %s", aw, ah, video_extent)
    m_x = min(cfg.min_overlap, aw)
    m_y = min(cfg.min_overlap, ah)
    ax, tx = _sample_axis(rng, video_extent.w, aw, t, m_x)
    ay, ty = _sample_axis(rng, video_extent.h, ah, t, m_y)
    anchor = Rect(video_extent.x + ax, video_extent.y + ay, aw, ah)
    target = Rect(video_extent.x + tx, video_extent.y + ty, t, t)
    ow, oh = rect_overlap(anchor, target)
    assert ow >= m_x and oh >= m_y
    return TrainingWindows(anchor, target, clamped)
