"""Counter-based random streams keyed by (seed, stream id...).

Every independent draw in the package (a degree vector, one membership row,
one Monte Carlo replicate) asks for its own Philox stream, so results do not
depend on evaluation order or on how work is split across processes.
"""

from __future__ import annotations

import zlib

import numpy as np

from .errors import InvalidInputError

_U64 = 2**64


def _stream_word(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    part = int(part)
    if part < 0:
        raise InvalidInputError(f"stream ids must be nonnegative, got {part}")
    return part


def generator(seed: int, *stream) -> np.random.Generator:
    """A Philox generator for the stream ``stream`` under ``seed``."""
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise InvalidInputError(f"seed must be an unsigned 64-bit integer, got {seed}")
    key = tuple(_stream_word(p) for p in stream)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))
