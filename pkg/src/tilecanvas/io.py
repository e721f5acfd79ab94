"""FYCT volume container.

Layout, all little-endian: 4-byte magic ``FYCT``, u32 version (1), u32 F, C,
H, W, then F*C*H*W float32 values in C order.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .errors import FormatError, LengthError, NumericError, ShapeError

MAGIC = b"FYCT"
VERSION = 1
_HEADER = struct.Struct("<4s5I")


def encode_volume(vol: np.ndarray) -> bytes:
    arr = np.asarray(vol)
    if arr.ndim != 4:
        raise ShapeError(f"volume must be 4-D, got shape {arr.shape}")
    payload = np.ascontiguousarray(arr, dtype="<f4")
    return _HEADER.pack(MAGIC, VERSION, *payload.shape) + payload.tobytes()


def decode_volume(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise LengthError(f"{len(data)} bytes is shorter than the {_HEADER.size}-byte header")
    magic, version, F, C, H, W = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    expected = F * C * H * W * 4
    got = len(data) - _HEADER.size
    if got != expected:
        raise LengthError(f"header says {expected} payload bytes, found {got}")
    vol = np.frombuffer(data, dtype="<f4", offset=_HEADER.size).reshape(F, C, H, W)
    if not np.all(np.isfinite(vol)):
        raise NumericError("volume contains NaN or Inf")
    return vol.astype(np.float32)


def write_volume(path: str | os.PathLike, vol: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_volume(vol))


def read_volume(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_volume(fh.read())
