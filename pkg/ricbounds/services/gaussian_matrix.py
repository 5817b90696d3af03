"""Gaussian measurement matrices and the RICM binary layout.

RICM files are little-endian: magic ``b"RICM"``, u32 n, u32 N, then n*N f64
entries in column-major order.
"""

from __future__ import annotations

import logging
import math
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ricbounds.core.errors import DomainError, MatrixFormatError
from ricbounds.core.models import MatrixSample
from ricbounds.core.settings import get_settings
from ricbounds.services.counter_rng import CounterRng


logger = logging.getLogger(__name__)

MAGIC = b"RICM"
HEADER = struct.Struct("<4sII")
_U32_MAX = 2**32 - 1


def sample_gaussian(n: int, N: int, seed: int, entry_cap: Optional[int] = None) -> MatrixSample:
    """n x N matrix with i.i.d. Normal(0, 1/n) entries, filled column by column from stream 0."""
    if not (1 <= n <= N):
        raise DomainError(f"need 1 <= n <= N, got n={n!r}, N={N!r}")
    cap = get_settings().matrix_entry_cap if entry_cap is None else entry_cap
    if n * N > cap:
        raise DomainError(f"{n}x{N} matrix has {n * N} entries; cap is {cap} (RIC_BOUNDS_MATRIX_ENTRY_CAP)")
    z = CounterRng(seed).normal(n * N)
    entries = z.reshape((n, N), order="F") / math.sqrt(n)
    logger.debug("sampled %dx%d Gaussian matrix with seed %d", n, N, seed)
    return MatrixSample(entries=np.ascontiguousarray(entries), n=n, N=N, seed=seed)


def write_matrix(sample: MatrixSample, path: Union[str, Path]) -> Path:
    path = Path(path)
    if sample.n > _U32_MAX or sample.N > _U32_MAX:
        raise DomainError("matrix dimensions exceed the u32 header fields")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as f:
        f.write(HEADER.pack(MAGIC, sample.n, sample.N))
        f.write(sample.entries.astype("<f8").tobytes(order="F"))
    return path


def read_matrix(path: Union[str, Path]) -> MatrixSample:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < HEADER.size:
        raise MatrixFormatError(f"{path} is too short for a RICM header")
    magic, n, N = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MatrixFormatError(f"{path} has magic {magic!r}, expected {MAGIC!r}")
    expected = HEADER.size + 8 * n * N
    if len(data) != expected:
        raise MatrixFormatError(f"{path} holds {len(data)} bytes; a {n}x{N} matrix needs {expected}")
    if not (1 <= n <= N):
        raise MatrixFormatError(f"{path} declares invalid dimensions n={n}, N={N}")
    flat = np.frombuffer(data, dtype="<f8", offset=HEADER.size)
    entries = flat.reshape((n, N), order="F").astype(np.float64)
    return MatrixSample(entries=np.ascontiguousarray(entries), n=n, N=N)
