"""Bracketed root finding: secant steps that fall back to bisection."""

from __future__ import annotations

import logging
import math
from typing import Callable, NamedTuple, Tuple

from ricbounds.core.errors import BracketError, NonConvergenceError


logger = logging.getLogger(__name__)


class RootResult(NamedTuple):
    root: float
    value: float
    iterations: int
    bracket: Tuple[float, float]


def bracketed_root(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tolerance: float,
    max_iterations: int,
    f_lo: float | None = None,
    f_hi: float | None = None,
) -> RootResult:
    """Find x in [lo, hi] with |func(x)| <= tolerance.

    ``func(lo)`` and ``func(hi)`` must have opposite signs. Every evaluation
    stays inside the current bracket: a secant iterate that falls outside it,
    or a secant step after the same endpoint was kept twice in a row, is
    replaced by the midpoint.
    """
    if f_lo is None:
        f_lo = func(lo)
    if f_hi is None:
        f_hi = func(hi)
    if abs(f_lo) <= tolerance:
        return RootResult(lo, f_lo, 0, (lo, hi))
    if abs(f_hi) <= tolerance:
        return RootResult(hi, f_hi, 0, (lo, hi))
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]: f={f_lo!r}, {f_hi!r}")

    stale = 0  # consecutive updates on the same side
    last_side = 0
    for iteration in range(1, max_iterations + 1):
        x = math.nan
        if stale < 2 and f_hi != f_lo:
            x = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        if not (lo < x < hi):
            x = lo + 0.5 * (hi - lo)
            stale = 0
        if not (lo < x < hi):
            # bracket is down to adjacent floats
            best = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
            if abs(best[1]) <= tolerance:
                return RootResult(best[0], best[1], iteration, (lo, hi))
            raise NonConvergenceError(
                f"bracket collapsed with residual {abs(best[1])!r} above tolerance {tolerance!r}", (lo, hi)
            )

        fx = func(x)
        if abs(fx) <= tolerance:
            return RootResult(x, fx, iteration, (lo, hi))
        if (fx > 0.0) == (f_lo > 0.0):
            lo, f_lo = x, fx
            side = -1
        else:
            hi, f_hi = x, fx
            side = 1
        stale = stale + 1 if side == last_side else 1
        last_side = side

    logger.debug("root search exhausted %d iterations on [%r, %r]", max_iterations, lo, hi)
    raise NonConvergenceError(f"no root within tolerance after {max_iterations} iterations", (lo, hi))
