"""Source signals and their diffusion through a graph."""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch

DEFAULT_DEPTH = 2

_MAGIC = b"GDIFFSIG"
_HEADER = struct.Struct("<8sII")  # magic, n, m: 16 bytes


@dataclass(frozen=True, eq=False)
class SignalMatrix:
    """``n x m`` matrix whose columns are signals on the graph nodes."""

    n: int
    m: int
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=float, copy=True)
        if data.shape != (self.n, self.m):
            raise DimensionMismatch(f"data shape {data.shape} != ({self.n}, {self.m})")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_array(cls, data):
        data = np.atleast_2d(np.asarray(data, dtype=float))
        return cls(data.shape[0], data.shape[1], data)


def check_depth(k):
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ValueError(f"diffusion depth must be a non-negative integer, got {k!r}")
    return int(k)


def sample_iid_normal(n, m, seed=None):
    """``n x m`` matrix of i.i.d. N(0, 1) draws from the seeded stream."""
    if n < 1 or m < 1:
        raise ValueError("n and m must both be at least 1")
    rng = np.random.default_rng(seed)
    return SignalMatrix(n, m, rng.standard_normal((n, m)))


def diffuse(t, x, k):
    """Apply the diffusion matrix ``k`` times: ``Y = T^k X``.

    Uses repeated products only, so it stays independent of any spectral code.
    """
    k = check_depth(k)
    tm = np.asarray(getattr(t, "t", t), dtype=float)
    if tm.shape != (x.n, x.n):
        raise DimensionMismatch(f"diffusion matrix {tm.shape} vs signals with n={x.n}")
    y = np.array(x.data)
    for _ in range(k):
        y = tm @ y
    return SignalMatrix(x.n, x.m, y)


def write_signals(x, path):
    """Binary dump: 16-byte header then little-endian row-major float64."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, x.n, x.m))
        fh.write(np.ascontiguousarray(x.data, dtype="<f8").tobytes())


def read_signals(path):
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError("truncated signal file")
    magic, n, m = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    body = raw[_HEADER.size:]
    if len(body) != 8 * n * m:
        raise ValueError(f"expected {8 * n * m} data bytes, found {len(body)}")
    return SignalMatrix(n, m, np.frombuffer(body, dtype="<f8").reshape(n, m))
