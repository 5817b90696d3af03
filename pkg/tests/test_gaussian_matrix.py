import struct

import numpy as np
import pytest

from ricbounds.core.errors import DomainError, MatrixFormatError
from ricbounds.services.counter_rng import CounterRng
from ricbounds.services.gaussian_matrix import HEADER, MAGIC, read_matrix, sample_gaussian, write_matrix


def test_sample_is_deterministic():
    a = sample_gaussian(8, 12, seed=5)
    b = sample_gaussian(8, 12, seed=5)
    assert a.entries.tobytes() == b.entries.tobytes()
    assert a.seed == 5
    assert a.entries.shape == (8, 12)


def test_different_seeds_differ():
    assert not np.array_equal(sample_gaussian(8, 12, seed=1).entries, sample_gaussian(8, 12, seed=2).entries)


def test_entries_are_column_major_normals():
    sample = sample_gaussian(4, 6, seed=17)
    z = CounterRng(17).normal(24) / 2.0
    assert sample.entries[:, 0] == pytest.approx(z[:4], rel=1e-15)
    assert sample.entries[0, 1] == pytest.approx(z[4], rel=1e-15)


def test_entry_statistics():
    n, N = 100, 1000
    entries = sample_gaussian(n, N, seed=123).entries
    std = np.sqrt(1.0 / n)
    assert abs(entries.mean()) < 6.0 * std / np.sqrt(n * N)
    assert entries.var() == pytest.approx(1.0 / n, rel=0.05)


def test_size_guards():
    with pytest.raises(DomainError):
        sample_gaussian(10, 20, seed=0, entry_cap=100)
    with pytest.raises(DomainError):
        sample_gaussian(5, 4, seed=0)


def test_matrix_file_round_trip(tmp_path):
    sample = sample_gaussian(3, 5, seed=8)
    path = write_matrix(sample, tmp_path / "a.ricm")
    loaded = read_matrix(path)
    assert (loaded.n, loaded.N) == (3, 5)
    assert np.array_equal(loaded.entries, sample.entries)


def test_matrix_file_layout(tmp_path):
    sample = sample_gaussian(2, 3, seed=4)
    data = write_matrix(sample, tmp_path / "a.ricm").read_bytes()
    assert data[:4] == MAGIC
    assert struct.unpack_from("<II", data, 4) == (2, 3)
    assert len(data) == HEADER.size + 8 * 6
    first, second = struct.unpack_from("<dd", data, HEADER.size)
    assert (first, second) == (sample.entries[0, 0], sample.entries[1, 0])


def test_matrix_file_errors(tmp_path):
    bad_magic = tmp_path / "bad.ricm"
    bad_magic.write_bytes(HEADER.pack(b"XXXX", 1, 1) + struct.pack("<d", 1.0))
    with pytest.raises(MatrixFormatError):
        read_matrix(bad_magic)

    truncated = tmp_path / "short.ricm"
    truncated.write_bytes(HEADER.pack(MAGIC, 2, 2) + struct.pack("<d", 1.0))
    with pytest.raises(MatrixFormatError):
        read_matrix(truncated)

    tiny = tmp_path / "tiny.ricm"
    tiny.write_bytes(b"RIC")
    with pytest.raises(MatrixFormatError):
        read_matrix(tiny)
