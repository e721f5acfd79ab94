import numpy as np
import pytest

from tilecanvas.geometry import PlanConfig, Rect

FLAGSHIP_CANVAS = Rect(0, 0, 2048, 1152)
FLAGSHIP_SOURCE = Rect(768, 320, 512, 512)


def coverage_count(region: Rect, rects) -> np.ndarray:
    """Brute force: how many rects cover each pixel of ``region``."""
    counts = np.zeros((region.h, region.w), dtype=np.int32)
    for r in rects:
        y0, y1 = max(r.y, region.y) - region.y, min(r.y1, region.y1) - region.y
        x0, x1 = max(r.x, region.x) - region.x, min(r.x1, region.x1) - region.x
        if y1 > y0 and x1 > x0:
            counts[y0:y1, x0:x1] += 1
    return counts


def grid_neighbours(rects):
    """Pairs of horizontally or vertically adjacent windows in a row-major grid."""
    xs = sorted({r.x for r in rects})
    ys = sorted({r.y for r in rects})
    at = {(r.x, r.y): r for r in rects}
    pairs = []
    for y in ys:
        for a, b in zip(xs, xs[1:]):
            pairs.append(("x", at[(a, y)], at[(b, y)]))
    for x in xs:
        for a, b in zip(ys, ys[1:]):
            pairs.append(("y", at[(x, a)], at[(x, b)]))
    return pairs


@pytest.fixture
def flagship_plan_config():
    return PlanConfig(FLAGSHIP_CANVAS, FLAGSHIP_SOURCE, 512, 128)


def smooth_field(shape, seed=0):
    F, C, H, W = shape
    rng = np.random.default_rng(seed)
    yy, xx = np.meshgrid(np.linspace(0, 1, H), np.linspace(0, 1, W), indexing="ij")
    out = np.empty(shape, dtype=np.float32)
    for f in range(F):
        for c in range(C):
            a, b, ph = rng.uniform(0.5, 3, size=3)
            out[f, c] = 0.5 + 0.4 * np.sin(2 * np.pi * (a * yy + b * xx) + ph)
    return out
