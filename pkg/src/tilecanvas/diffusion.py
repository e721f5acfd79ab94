"""DDIM sampling, classifier-free guidance and the denoiser interface.

A denoiser is any callable taking a :class:`DenoiserRequest` and returning a
:class:`DenoiserResponse`. It must be pure with respect to the request, since
windows of one step are evaluated concurrently and in no particular order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .conditioning import ConditioningBundle, ModelInput
from .errors import InvalidConfigError, NumericError, ShapeError
from .geometry import Rect

TRAIN_STEPS = 1000
INFERENCE_STEPS = 40
CFG_SCALE = 7.5
BETA_START = 1e-4
BETA_END = 2e-2


@dataclass(frozen=True)
class NoiseSchedule:
    alphas_bar: np.ndarray  # indexed by training timestep
    step_indices: np.ndarray  # descending timesteps visited by the sampler

    def __len__(self) -> int:
        return len(self.step_indices)

    def abar(self, t: int) -> float:
        """Cumulative signal level at ``t``; ``t < 0`` is the clean endpoint (1.0)."""
        return 1.0 if t < 0 else float(self.alphas_bar[t])

    def pair(self, t_index: int) -> tuple[int, float, float]:
        """(timestep, abar_t, abar_prev) for sampler step ``t_index``."""
        t = int(self.step_indices[t_index])
        if t_index + 1 < len(self.step_indices):
            prev = int(self.step_indices[t_index + 1])
        else:
            prev = -1
        return t, self.abar(t), self.abar(prev)


def make_schedule(train_steps: int = TRAIN_STEPS, inference_steps: int = INFERENCE_STEPS) -> NoiseSchedule:
    if train_steps < 1 or not 1 <= inference_steps <= train_steps:
        raise InvalidConfigError(
            f"need 1 <= inference_steps <= train_steps, got {inference_steps} / {train_steps}"
        )
    betas = np.linspace(BETA_START, BETA_END, train_steps, dtype=np.float64)
    alphas_bar = np.cumprod(1.0 - betas)
    stride = train_steps // inference_steps
    steps = (np.arange(inference_steps, dtype=np.int64) * stride)[::-1].copy()
    alphas_bar.setflags(write=False)
    steps.setflags(write=False)
    return NoiseSchedule(alphas_bar=alphas_bar, step_indices=steps)


def ddim_step(x_t: np.ndarray, eps_hat: np.ndarray, abar_t: float, abar_prev: float) -> np.ndarray:
    """Deterministic (eta = 0) DDIM update, computed in float64."""
    if x_t.shape != eps_hat.shape:
        raise ShapeError(f"x_t {x_t.shape} vs eps {eps_hat.shape}")
    if not (0.0 < abar_t <= 1.0 and 0.0 < abar_prev <= 1.0):
        raise InvalidConfigError(f"signal levels out of (0, 1]: {abar_t}, {abar_prev}")
    x = np.asarray(x_t, dtype=np.float64)
    e = np.asarray(eps_hat, dtype=np.float64)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(e))):
        raise NumericError("non-finite input to ddim_step")
    x0 = predict_x0(x, e, abar_t)
    return np.sqrt(abar_prev) * x0 + np.sqrt(1.0 - abar_prev) * e


def predict_x0(x_t: np.ndarray, eps_hat: np.ndarray, abar_t: float) -> np.ndarray:
    return (x_t - np.sqrt(1.0 - abar_t) * eps_hat) / np.sqrt(abar_t)


def cfg_combine(eps_cond: np.ndarray, eps_uncond: np.ndarray, scale: float = CFG_SCALE) -> np.ndarray:
    if eps_cond.shape != eps_uncond.shape:
        raise ShapeError(f"cond {eps_cond.shape} vs uncond {eps_uncond.shape}")
    c = np.asarray(eps_cond, dtype=np.float64)
    u = np.asarray(eps_uncond, dtype=np.float64)
    return u + scale * (c - u)


@dataclass(frozen=True)
class DenoiserRequest:
    input: ModelInput
    bundle: ConditioningBundle
    timestep: int
    window_rect: Rect  # latent coordinates in the full-canvas frame


@dataclass(frozen=True)
class DenoiserResponse:
    eps_cond: np.ndarray
    eps_uncond: np.ndarray


class Denoiser(Protocol):
    def __call__(self, request: DenoiserRequest) -> DenoiserResponse: ...


class OracleDenoiser:
    """Predicts exactly the noise that maps ``x_t`` onto a known target.

    Under :func:`ddim_step` the predicted clean sample equals the target slice,
    so a full sampling loop converges onto ``target`` up to rounding.
    """

    def __init__(self, target: np.ndarray, schedule: NoiseSchedule):
        self.target = np.asarray(target)
        self.schedule = schedule

    def __call__(self, request: DenoiserRequest) -> DenoiserResponse:
        r = request.window_rect
        _, _, H, W = self.target.shape
        if r.x < 0 or r.y < 0 or r.x1 > W or r.y1 > H:
            raise ShapeError(f"window {r} outside oracle target {W}x{H}")
        rows, cols = r.slices()
        z = self.target[:, :, rows, cols].astype(np.float64)
        x = request.input.noisy.astype(np.float64)
        if z.shape != x.shape:
            raise ShapeError(f"target slice {z.shape} vs noisy input {x.shape}")
        abar = self.schedule.abar(request.timestep)
        eps = (x - np.sqrt(abar) * z) / np.sqrt(1.0 - abar)
        return DenoiserResponse(eps_cond=eps, eps_uncond=eps)


def oracle_denoiser(target_canvas: np.ndarray, schedule: NoiseSchedule) -> OracleDenoiser:
    return OracleDenoiser(target_canvas, schedule)


def _stream(*parts) -> np.random.Generator:
    h = hashlib.sha256(repr(parts).encode()).digest()
    return np.random.default_rng(np.frombuffer(h, dtype=np.uint32))


class ProceduralDenoiser:
    """Pseudo-random noise predictions keyed on the request.

    The unconditional branch depends on (seed, window, timestep) only; the
    conditional branch adds a term keyed on the bundle digest, so any change to
    the conditioning tokens shows up in ``eps_cond`` and nowhere else.
    """

    def __init__(self, seed: int, cond_strength: float = 0.1):
        self.seed = int(seed)
        self.cond_strength = cond_strength

    def __call__(self, request: DenoiserRequest) -> DenoiserResponse:
        shape = request.input.noisy.shape
        key = (self.seed, tuple(request.window_rect.as_list()), int(request.timestep))
        uncond = _stream("uncond", *key).standard_normal(shape)
        delta = _stream("cond", *key, request.bundle.digest()).standard_normal(shape)
        return DenoiserResponse(eps_cond=uncond + self.cond_strength * delta, eps_uncond=uncond)


def procedural_denoiser(seed: int) -> ProceduralDenoiser:
    return ProceduralDenoiser(seed)

