"""Pixel <-> latent stand-ins for a VAE.

``passthrough`` treats pixels as latents. ``box8`` averages 8x8 blocks on
the way down and repeats each latent cell on the way up; it exists to
exercise factor-8 coordinate bookkeeping, not to model a real autoencoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, ShapeError


@dataclass(frozen=True)
class Codec:
    name: str
    factor: int = 1

    def __post_init__(self) -> None:
        if self.factor < 1:
            raise InvalidConfigError(f"codec factor must be >= 1, got {self.factor}")

    def encode(self, pixels: np.ndarray) -> np.ndarray:
        f = self.factor
        F, C, H, W = pixels.shape
        if H % f or W % f:
            raise ShapeError(f"{H}x{W} frame not divisible by codec factor {f}")
        if f == 1:
            return np.array(pixels, dtype=np.float32)
        blocks = pixels.reshape(F, C, H // f, f, W // f, f).astype(np.float64)
        return blocks.mean(axis=(3, 5)).astype(np.float32)

    def decode(self, latents: np.ndarray) -> np.ndarray:
        f = self.factor
        if f == 1:
            return np.array(latents, dtype=np.float32)
        return np.repeat(np.repeat(latents, f, axis=2), f, axis=3).astype(np.float32)


CODECS = {
    "passthrough": Codec("passthrough", 1),
    "box8": Codec("box8", 8),
}


def get_codec(name: str) -> Codec:
    try:
        return CODECS[name]
    except KeyError:
        raise InvalidConfigError(f"unknown codec {name!r}; choose from {sorted(CODECS)}") from None
