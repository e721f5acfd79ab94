"""PSNR and SSIM on (F, C, H, W) volumes, computed per frame then averaged."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInputError, ShapeError

PSNR_IDENTICAL = math.inf

SSIM_WIN = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _check(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.ndim != 4:
        raise ShapeError(f"expected (F, C, H, W), got {a.shape}")
    return a, b


def psnr(a, b, peak: float = 1.0) -> float:
    """Mean per-frame PSNR in dB; ``inf`` when every frame matches exactly."""
    a, b = _check(a, b)
    mse = ((a - b) ** 2).mean(axis=(1, 2, 3))
    with np.errstate(divide="ignore"):
        per_frame = 10.0 * np.log10(peak**2 / mse)
    return float(per_frame.mean())


def _gaussian_kernel(size: int = SSIM_WIN, sigma: float = SSIM_SIGMA) -> np.ndarray:
    x = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    k = np.exp(-(x**2) / (2 * sigma**2))
    return k / k.sum()


def _filter_valid(img: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Separable 'valid' correlation over the last two axes."""
    n = len(k)
    rows = np.lib.stride_tricks.sliding_window_view(img, n, axis=-2) @ k
    return np.lib.stride_tricks.sliding_window_view(rows, n, axis=-1) @ k


def ssim(a, b, peak: float = 1.0) -> float:
    a, b = _check(a, b)
    if a.shape[2] < SSIM_WIN or a.shape[3] < SSIM_WIN:
        raise InvalidInputError(f"SSIM needs frames of at least {SSIM_WIN}x{SSIM_WIN}, got {a.shape[2:]}")
    k = _gaussian_kernel()
    c1 = (SSIM_K1 * peak) ** 2
    c2 = (SSIM_K2 * peak) ** 2
    mu_a = _filter_valid(a, k)
    mu_b = _filter_valid(b, k)
    var_a = _filter_valid(a * a, k) - mu_a**2
    var_b = _filter_valid(b * b, k) - mu_b**2
    cov = _filter_valid(a * b, k) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    per_frame = (num / den).mean(axis=(1, 2, 3))
    return float(per_frame.mean())
