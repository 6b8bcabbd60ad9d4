"""Bit-exact binary format for named weight tensors.

Layout: magic ``NLPW``, format version (u32 LE), tensor count (u32 LE); then
per tensor: name length (u16 LE) + UTF-8 name, rank (u8), each dimension
(u32 LE), and the data as little-endian float64, row-major.
"""

from __future__ import annotations

import io
import struct
from typing import BinaryIO, Union

import numpy as np

MAGIC = b"NLPW"
FORMAT_VERSION = 1


class WeightsFormatError(Exception):
    """Base class for weight-file problems."""


class BadMagicError(WeightsFormatError):
    pass


class UnsupportedVersionError(WeightsFormatError):
    pass


class TruncatedWeightsError(WeightsFormatError):
    pass


def write_weights(target: Union[str, BinaryIO], tensors: dict[str, np.ndarray]):
    """Serialize named float64 arrays, preserving iteration order."""
    close = False
    if isinstance(target, str):
        target = open(target, "wb")
        close = True
    try:
        target.write(MAGIC)
        target.write(struct.pack("<II", FORMAT_VERSION, len(tensors)))
        for name, array in tensors.items():
            encoded = name.encode("utf-8")
            if len(encoded) > 0xFFFF:
                raise ValueError(f"tensor name too long: {name[:32]}...")
            array = np.asarray(array, dtype=np.float64)
            if array.ndim > 0xFF:
                raise ValueError(f"tensor rank too large for '{name}'")
            target.write(struct.pack("<H", len(encoded)))
            target.write(encoded)
            target.write(struct.pack("<B", array.ndim))
            for dim in array.shape:
                target.write(struct.pack("<I", dim))
            target.write(np.ascontiguousarray(array, dtype="<f8").tobytes())
    finally:
        if close:
            target.close()


def _read_exact(source: BinaryIO, count: int, context: str) -> bytes:
    data = source.read(count)
    if len(data) != count:
        raise TruncatedWeightsError(f"truncated weights file while reading {context}")
    return data


def read_weights(source: Union[str, bytes, BinaryIO]) -> dict[str, np.ndarray]:
    """Parse a weights stream; magic and version are validated first."""
    close = False
    if isinstance(source, str):
        source = open(source, "rb")
        close = True
    elif isinstance(source, bytes):
        source = io.BytesIO(source)
    try:
        magic = _read_exact(source, 4, "magic bytes")
        if magic != MAGIC:
            raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
        version, count = struct.unpack("<II", _read_exact(source, 8, "header"))
        if version != FORMAT_VERSION:
            raise UnsupportedVersionError(
                f"unsupported weights format version {version}, expected {FORMAT_VERSION}"
            )
        tensors: dict[str, np.ndarray] = {}
        for i in range(count):
            (name_len,) = struct.unpack("<H", _read_exact(source, 2, f"tensor {i} name length"))
            name = _read_exact(source, name_len, f"tensor {i} name").decode("utf-8")
            (rank,) = struct.unpack("<B", _read_exact(source, 1, f"rank of '{name}'"))
            shape = tuple(
                struct.unpack("<I", _read_exact(source, 4, f"dimensions of '{name}'"))[0]
                for _ in range(rank)
            )
            n_bytes = 8 * int(np.prod(shape, dtype=np.int64)) if shape else 8
            raw = source.read(n_bytes)
            if len(raw) != n_bytes:
                raise TruncatedWeightsError(f"truncated tensor data for '{name}'")
            tensors[name] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
        return tensors
    finally:
        if close:
            source.close()
