"""k-subsets of range(N) in lexicographic order, with unrank and in-place successor."""

from __future__ import annotations

from math import comb
from typing import Iterator, List, Tuple

from ricbounds.core.errors import DomainError


def _check(N: int, k: int) -> None:
    if not (1 <= k <= N):
        raise DomainError(f"need 1 <= k <= N, got k={k!r}, N={N!r}")


def unrank_combination(rank: int, N: int, k: int) -> List[int]:
    """The combination at position ``rank`` of the lexicographic order."""
    _check(N, k)
    total = comb(N, k)
    if not (0 <= rank < total):
        raise DomainError(f"rank {rank!r} outside [0, {total})")
    out: List[int] = []
    x = 0
    for i in range(k):
        while True:
            count = comb(N - 1 - x, k - 1 - i)
            if rank < count:
                break
            rank -= count
            x += 1
        out.append(x)
        x += 1
    return out


def next_combination(c: List[int], N: int) -> bool:
    """Advance ``c`` in place; False once it was the last combination."""
    k = len(c)
    i = k - 1
    while i >= 0 and c[i] == N - k + i:
        i -= 1
    if i < 0:
        return False
    c[i] += 1
    for j in range(i + 1, k):
        c[j] = c[j - 1] + 1
    return True


def iter_combinations(N: int, k: int, start: int = 0, stop: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Combinations with ranks in [start, stop)."""
    total = comb(N, k)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    c = unrank_combination(start, N, k)
    for _ in range(stop - start):
        yield tuple(c)
        if not next_combination(c, N):
            return


def split_ranks(total: int, parts: int) -> List[Tuple[int, int]]:
    """Contiguous [start, stop) ranges, sizes differing by at most one."""
    parts = max(1, min(parts, total))
    base, extra = divmod(total, parts)
    ranges: List[Tuple[int, int]] = []
    start = 0
    for i in range(parts):
        stop = start + base + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges
