"""Window covers and multi-round anchor growth plans.

All coordinates are integer pixels. A round denoises a grid of fixed-size
windows covering the current anchor grown by ``window - min_overlap`` on
each side (clamped to the canvas); the covered rectangle becomes the next
round's anchor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidConfigError


@dataclass(frozen=True, order=True)
class Rect:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise InvalidConfigError(f"rect needs positive size, got {self.w}x{self.h}")

    @property
    def x1(self) -> int:
        return self.x + self.w

    @property
    def y1(self) -> int:
        return self.y + self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def contains(self, other: Rect) -> bool:
        return (
            self.x <= other.x
            and self.y <= other.y
            and other.x1 <= self.x1
            and other.y1 <= self.y1
        )

    def translate(self, dx: int, dy: int) -> Rect:
        return Rect(self.x + dx, self.y + dy, self.w, self.h)

    def scaled_down(self, factor: int) -> Rect:
        """Divide every edge by ``factor``; edges must be multiples of it."""
        for v in (self.x, self.y, self.w, self.h):
            if v % factor:
                raise InvalidConfigError(f"{self} is not aligned to codec factor {factor}")
        return Rect(self.x // factor, self.y // factor, self.w // factor, self.h // factor)

    def scaled_up(self, factor: int) -> Rect:
        return Rect(self.x * factor, self.y * factor, self.w * factor, self.h * factor)

    def slices(self) -> tuple[slice, slice]:
        """(row, column) slices for indexing an array whose origin is (0, 0)."""
        return slice(self.y, self.y1), slice(self.x, self.x1)

    def as_list(self) -> list[int]:
        return [self.x, self.y, self.w, self.h]


def rect_overlap(a: Rect, b: Rect) -> tuple[int, int]:
    ow = max(0, min(a.x1, b.x1) - max(a.x, b.x))
    oh = max(0, min(a.y1, b.y1) - max(a.y, b.y))
    return ow, oh


def bounding_rect(rects: Sequence[Rect]) -> Rect:
    x0 = min(r.x for r in rects)
    y0 = min(r.y for r in rects)
    x1 = max(r.x1 for r in rects)
    y1 = max(r.y1 for r in rects)
    return Rect(x0, y0, x1 - x0, y1 - y0)


@dataclass(frozen=True)
class PlanConfig:
    canvas: Rect
    source: Rect
    window: int = 512
    min_overlap: int = 128

    @property
    def reach(self) -> int:
        """How far a round may extend beyond its anchor on each side."""
        return self.window - self.min_overlap

    def validate(self, codec_factor: int = 1) -> None:
        if self.canvas.x != 0 or self.canvas.y != 0:
            raise InvalidConfigError("canvas must sit at the origin")
        if not 0 < self.min_overlap < self.window:
            raise InvalidConfigError(
                f"need 0 < min_overlap < window, got {self.min_overlap} / {self.window}"
            )
        if not self.canvas.contains(self.source):
            raise InvalidConfigError(f"source {self.source} not inside canvas {self.canvas}")
        if min(self.source.w, self.source.h) < self.min_overlap:
            raise InvalidConfigError("source is thinner than min_overlap; no window can satisfy it")
        if codec_factor < 1:
            raise InvalidConfigError("codec factor must be >= 1")
        for name, v in (("window", self.window), ("stride", self.reach)):
            if v % codec_factor:
                raise InvalidConfigError(f"{name} {v} not divisible by codec factor {codec_factor}")
        self.canvas.scaled_down(codec_factor)
        self.source.scaled_down(codec_factor)


@dataclass(frozen=True)
class Round:
    anchor: Rect
    windows: tuple[Rect, ...]

    @property
    def region(self) -> Rect:
        return bounding_rect((self.anchor, *self.windows))


@dataclass(frozen=True)
class RoundPlan:
    rounds: tuple[Round, ...]

    def __len__(self) -> int:
        return len(self.rounds)

    def __iter__(self) -> Iterator[Round]:
        return iter(self.rounds)

    def __getitem__(self, i: int) -> Round:
        return self.rounds[i]

    def to_dict(self) -> dict:
        return {
            "rounds": [
                {"anchor": r.anchor.as_list(), "windows": [w.as_list() for w in r.windows]}
                for r in self.rounds
            ]
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def axis_positions(length: int, window: int, min_overlap: int) -> list[int]:
    """Window start offsets along one axis of ``length`` pixels.

    Windows are clamped to ``length`` when the axis is shorter than a window.
    """
    if not 0 < min_overlap < window:
        raise InvalidConfigError(f"need 0 < min_overlap < window, got {min_overlap} / {window}")
    size = min(window, length)
    if size == length:
        return [0]
    stride = window - min_overlap
    positions = []
    pos = 0
    while pos + size < length:
        positions.append(pos)
        pos += stride
    positions.append(length - size)
    return positions


def plan_windows(region: Rect, window: int, min_overlap: int) -> list[Rect]:
    """Row-major cover of ``region`` by ``window``-sided squares."""
    xs = axis_positions(region.w, window, min_overlap)
    ys = axis_positions(region.h, window, min_overlap)
    ww, wh = min(window, region.w), min(window, region.h)
    return [Rect(region.x + x, region.y + y, ww, wh) for y in ys for x in xs]


def _grow(anchor: Rect, canvas: Rect, reach: int) -> Rect:
    x0 = max(canvas.x, anchor.x - reach)
    y0 = max(canvas.y, anchor.y - reach)
    x1 = min(canvas.x1, anchor.x1 + reach)
    y1 = min(canvas.y1, anchor.y1 + reach)
    return Rect(x0, y0, x1 - x0, y1 - y0)


def plan_rounds(cfg: PlanConfig, codec_factor: int = 1) -> RoundPlan:
    cfg.validate(codec_factor)
    rounds = []
    anchor = cfg.source
    while anchor != cfg.canvas:
        region = _grow(anchor, cfg.canvas, cfg.reach)
        windows = tuple(plan_windows(region, cfg.window, cfg.min_overlap))
        rounds.append(Round(anchor, windows))
        anchor = region
    return RoundPlan(tuple(rounds))


def max_margin(cfg: PlanConfig) -> int:
    c, s = cfg.canvas, cfg.source
    return max(s.x - c.x, s.y - c.y, c.x1 - s.x1, c.y1 - s.y1)
