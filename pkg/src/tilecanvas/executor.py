"""Per-step window dispatch and the idealized makespan model.

Window tasks run on a thread pool and are merged at a barrier in ascending
window index, so the result is independent of worker count and completion
order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .blending import merge_windows
from .conditioning import ConditioningBundle, assemble_model_input
from .diffusion import CFG_SCALE, Denoiser, DenoiserRequest, NoiseSchedule, cfg_combine, ddim_step
from .errors import InvalidConfigError, NumericError, TileCanvasError, WindowFailure
from .geometry import Rect


@dataclass(frozen=True)
class StepTask:
    window_index: int
    rect: Rect
    request: DenoiserRequest


def _run_task(task: StepTask, denoiser: Denoiser, cfg_scale: float, abar_t: float, abar_prev: float):
    resp = denoiser(task.request)
    noisy = task.request.input.noisy
    for name, eps in (("eps_cond", resp.eps_cond), ("eps_uncond", resp.eps_uncond)):
        if eps.shape != noisy.shape:
            raise TileCanvasError(f"{name} shape {eps.shape} != noisy input {noisy.shape}")
        if not np.all(np.isfinite(eps)):
            raise NumericError(f"window {task.window_index}: {name} contains NaN or Inf")
    eps_hat = cfg_combine(resp.eps_cond, resp.eps_uncond, cfg_scale)
    out = ddim_step(noisy, eps_hat, abar_t, abar_prev).astype(np.float32)
    if not np.all(np.isfinite(out)):
        raise NumericError(f"window {task.window_index} produced non-finite values")
    return out


def dispatch_step(
    canvas_x_t: np.ndarray,
    windows: Sequence[Rect],
    denoiser: Denoiser,
    bundle_fn: Callable[[int, Rect], ConditioningBundle],
    schedule: NoiseSchedule,
    t_index: int,
    workers: int = 1,
    *,
    known_latent: np.ndarray,
    known_mask: np.ndarray,
    weights: np.ndarray,
    cfg_scale: float = CFG_SCALE,
    origin: tuple[int, int] = (0, 0),
) -> np.ndarray:
    """Advance ``canvas_x_t`` by one sampler step.

    ``windows`` are latent rects local to ``canvas_x_t``; ``origin`` is the
    canvas array's (x, y) offset in the full latent canvas and is only used to
    label requests so denoisers see full-canvas coordinates.
    """
    if workers < 1:
        raise InvalidConfigError(f"workers must be >= 1, got {workers}")
    t, abar_t, abar_prev = schedule.pair(t_index)
    ox, oy = origin
    tasks = []
    for k, rect in enumerate(windows):
        model_input = assemble_model_input(rect, canvas_x_t, known_mask, known_latent)
        request = DenoiserRequest(
            input=model_input,
            bundle=bundle_fn(k, rect),
            timestep=t,
            window_rect=rect.translate(ox, oy),
        )
        tasks.append(StepTask(k, rect, request))

    def run(task: StepTask):
        return _run_task(task, denoiser, cfg_scale, abar_t, abar_prev)

    results: list = [None] * len(tasks)
    errors: dict[int, BaseException] = {}
    if workers == 1:
        for task in tasks:
            try:
                results[task.window_index] = run(task)
            except Exception as exc:  # fail fast on the first window
                errors[task.window_index] = exc
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run, task) for task in tasks]
            for k, fut in enumerate(futures):
                exc = fut.exception()
                if exc is not None:
                    errors[k] = exc
                else:
                    results[k] = fut.result()
    if errors:
        k = min(errors)
        exc = errors[k]
        if isinstance(exc, NumericError):
            raise exc
        raise WindowFailure(k, exc) from exc

    return merge_windows(canvas_x_t.shape, list(zip(windows, results)), weights)


@dataclass(frozen=True)
class CostModel:
    per_window_cost: float = 1.0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.per_window_cost <= 0:
            raise InvalidConfigError("per_window_cost must be positive")
        if self.workers < 1:
            raise InvalidConfigError("workers must be >= 1")


def makespan(tasks: int, cost: CostModel) -> float:
    """Ideal wall time: windows run in waves of ``workers`` with no overhead."""
    if tasks < 0:
        raise InvalidConfigError("task count must be non-negative")
    return math.ceil(tasks / cost.workers) * cost.per_window_cost


# Measured wall time in minutes for 512x512 -> target resolution, 64 frames,
# at 1/2/4/8 GPUs.
MEASURED_RUNTIME_MIN = {
    (1280, 720): (25.2, 14.8, 7.8, 4.3),
    (1440, 810): (58.3, 33.5, 18.2, 11.5),
    (2048, 1152): (85.8, 51.9, 28.9, 16.2),
}
MEASURED_GPUS = (1, 2, 4, 8)


def schedule_table(window_counts: Sequence[int], worker_counts: Sequence[int], per_window_cost: float = 1.0):
    """Rows of (windows, workers, makespan, speedup vs 1 worker, ideal efficiency)."""
    rows = []
    for k in window_counts:
        serial = makespan(k, CostModel(per_window_cost, 1))
        for w in worker_counts:
            m = makespan(k, CostModel(per_window_cost, w))
            speedup = serial / m if m else 1.0
            rows.append((k, w, m, speedup, speedup / w))
    return rows
