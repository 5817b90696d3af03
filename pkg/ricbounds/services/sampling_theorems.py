"""Sampling statements derived from RIC bounds: OMP recovery and minimal gamma."""

from __future__ import annotations

import logging
import math
from typing import Optional, Tuple

from pydantic import ValidationError

from ricbounds.core.errors import DomainError, InfeasibleError, NonConvergenceError
from ricbounds.core.models import GridPoint, ProblemSize, RecoveryCondition, grid_point
from ricbounds.core.settings import get_settings
from ricbounds.services.asymptotic_bounds import bounds_gamma_path, gamma_limit_bounds


logger = logging.getLogger(__name__)

_FIXED_POINT_TOLERANCE = 1e-12
_FIXED_POINT_ITERATIONS = 200


def omp_condition(lower: float, upper: float, k: int) -> bool:
    """max(L, U) < 1/sqrt(k-1), sufficient for OMP to recover every k-sparse vector in k steps."""
    if k < 2:
        raise DomainError(f"OMP condition needs k >= 2, got {k!r}")
    return max(lower, upper) < 1.0 / math.sqrt(k - 1)


def omp_measurement_rhs(n: float, k: int, N: int) -> float:
    """2k(k-1)[3 + 2 log N + log n - 3 log k]."""
    return 2.0 * k * (k - 1) * (3.0 + 2.0 * math.log(N) + math.log(n) - 3.0 * math.log(k))


def omp_min_measurements(k: int, N: int) -> int:
    """Smallest n <= N with n > 2k(k-1)[3 + 2 log N + log n - 3 log k].

    n - rhs(n) is convex in n and negative at n = k, so the crossing is unique.
    A fixed-point iteration locates it and a scan around the fixed point settles
    the integer.
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    if N <= k:
        raise DomainError(f"N must exceed k, got N={N!r}, k={k!r}")

    n = max(float(k), omp_measurement_rhs(k, k, N))
    for _ in range(_FIXED_POINT_ITERATIONS):
        nxt = omp_measurement_rhs(n, k, N)
        if abs(nxt - n) <= _FIXED_POINT_TOLERANCE * n:
            n = nxt
            break
        n = nxt
    else:
        raise NonConvergenceError(f"fixed point for (k={k}, N={N}) did not converge", (n, nxt))

    candidate = max(k, int(math.floor(n)) - 2)
    while not candidate > omp_measurement_rhs(candidate, k, N):
        candidate += 1
    if candidate > N:
        raise InfeasibleError(f"no n <= N={N} satisfies the OMP measurement condition for k={k} (needs n={candidate})")
    logger.debug("omp_min_measurements(k=%d, N=%d) = %d (fixed point %.6f)", k, N, candidate, n)
    return candidate


def _bounds_at(gamma: float, c_u: float, c_l: float, path_delta: Optional[float]) -> Tuple[float, float]:
    if path_delta is None:
        pair = gamma_limit_bounds(gamma, c_u, c_l)
    else:
        pair = bounds_gamma_path(path_delta, gamma, c_u, c_l, warn=False)
    return pair.lower, pair.upper


def min_gamma(
    cond: RecoveryCondition,
    c_u: float = 1.0 / 3.0,
    c_l: float = 1.0 / 3.0,
    resolution: float = 1e-6,
    path_delta: Optional[float] = None,
    gamma_floor: Optional[float] = None,
    gamma_ceiling: Optional[float] = None,
) -> float:
    """Smallest gamma (within ``resolution``) at which ``cond`` holds for the gamma bounds.

    The gamma-limit bounds are used unless ``path_delta`` selects the full
    gamma-path bounds at that delta. Both decrease in gamma, so a monotone
    condition switches from failing to passing exactly once.
    """
    if not resolution > 0.0:
        raise DomainError(f"resolution must be positive, got {resolution!r}")
    settings = get_settings()
    floor = settings.gamma_floor if gamma_floor is None else gamma_floor
    ceiling = settings.gamma_ceiling if gamma_ceiling is None else gamma_ceiling

    def passes(gamma: float) -> bool:
        try:
            return cond(*_bounds_at(gamma, c_u, c_l, path_delta))
        except DomainError:
            # rho_gamma(path_delta, gamma) >= 1: gamma too small to be admissible
            return False

    if passes(floor):
        return floor
    if not passes(ceiling):
        raise InfeasibleError(f"condition {cond.description!r} fails for every gamma up to {ceiling:g}")

    lo, hi = floor, min(2.0 * floor, ceiling)
    while not passes(hi):
        lo, hi = hi, min(2.0 * hi, ceiling)
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi


def to_grid_point(size: ProblemSize) -> GridPoint:
    return grid_point(size.n / size.N, size.k / size.n)


def problem_size(k: int, n: int, N: int) -> ProblemSize:
    try:
        return ProblemSize(k=k, n=n, N=N)
    except ValidationError as exc:
        raise DomainError(str(exc.errors()[0]["msg"])) from exc
