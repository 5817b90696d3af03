"""Implicit RIC bounds from the zeros of the large-deviation exponents.

lambda_max solves Psi_max = 0 on [1+rho, inf) and lambda_min solves Psi_min = 0
on (0, 1-rho]. Each exponent is monotone on its side interval, so the root is
unique and a sign-change bracket suffices. The lower side switches to t = log
lambda when lambda_min can drop below the float range.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

from ricbounds.core.errors import BracketError, DomainError, SolverError
from ricbounds.core.models import GridPoint, RicPair, Side, SolverConfig
from ricbounds.services.root_finding import RootResult, bracketed_root
from ricbounds.services.scalar_kernels import big_psi_log_value, big_psi_value


logger = logging.getLogger(__name__)

LAMBDA_FLOOR = 1e-300
LOG_SOLVE_MARGIN = 1e-2
LOG_SOLVE_DELTA = 1e-20
_MAX_EXPANSIONS = 4096


class LambdaUnderflowError(SolverError):
    """Raised when lambda_min is below the smallest representable positive float."""


def _config(cfg: Optional[SolverConfig]) -> SolverConfig:
    return cfg if cfg is not None else SolverConfig.from_settings()


def solve_lambda_max(point: GridPoint, cfg: Optional[SolverConfig] = None) -> RootResult:
    cfg = _config(cfg)
    delta, rho = point.delta, point.rho

    def f(lam: float) -> float:
        return big_psi_value("max", lam, delta, rho)

    lo = 1.0 + rho
    f_lo = f(lo)
    if f_lo <= 0.0:
        raise BracketError(f"Psi_max(1+rho) = {f_lo!r} is not positive at {point}")

    hi = cfg.bracket_growth * lo
    f_hi = f(hi)
    expansions = 0
    while f_hi >= 0.0:
        if f_hi <= cfg.tolerance:
            return RootResult(hi, f_hi, 0, (lo, hi))
        lo, f_lo = hi, f_hi
        hi *= cfg.bracket_growth
        f_hi = f(hi)
        expansions += 1
        if expansions > _MAX_EXPANSIONS or not math.isfinite(hi):
            raise BracketError(f"could not bracket lambda_max at {point}")

    return bracketed_root(f, lo, hi, cfg.tolerance, cfg.max_iterations, f_lo, f_hi)


def _needs_log_solve(point: GridPoint) -> bool:
    return 1.0 - point.rho < LOG_SOLVE_MARGIN or point.delta < LOG_SOLVE_DELTA


def _solve_log_lambda_min(point: GridPoint, cfg: SolverConfig) -> RootResult:
    delta, rho = point.delta, point.rho

    def g(t: float) -> float:
        return big_psi_log_value("min", t, delta, rho)

    hi = math.log1p(-rho)
    g_hi = g(hi)
    if g_hi <= 0.0:
        raise BracketError(f"Psi_min(1-rho) = {g_hi!r} is not positive at {point}")

    step = math.log(cfg.bracket_growth)
    lo = hi - step
    g_lo = g(lo)
    expansions = 0
    while g_lo >= 0.0:
        if g_lo <= cfg.tolerance:
            return RootResult(lo, g_lo, 0, (lo, hi))
        hi, g_hi = lo, g_lo
        step *= cfg.bracket_growth
        lo = hi - step
        g_lo = g(lo)
        expansions += 1
        if expansions > _MAX_EXPANSIONS or not math.isfinite(lo):
            raise BracketError(f"could not bracket log lambda_min at {point}")

    return bracketed_root(g, lo, hi, cfg.tolerance, cfg.max_iterations, g_lo, g_hi)


def solve_log_lambda_min(point: GridPoint, cfg: Optional[SolverConfig] = None) -> RootResult:
    """Root of Psi_min in t = log lambda; the result's ``root`` is log lambda_min."""
    cfg = _config(cfg)
    if _needs_log_solve(point):
        return _solve_log_lambda_min(point, cfg)

    delta, rho = point.delta, point.rho

    def f(lam: float) -> float:
        return big_psi_value("min", lam, delta, rho)

    hi = 1.0 - rho
    f_hi = f(hi)
    if f_hi <= 0.0:
        raise BracketError(f"Psi_min(1-rho) = {f_hi!r} is not positive at {point}")

    lo = hi / cfg.bracket_growth
    f_lo = f(lo)
    while f_lo >= 0.0:
        if f_lo <= cfg.tolerance:
            return RootResult(math.log(lo), f_lo, 0, (math.log(lo), math.log(hi)))
        hi, f_hi = lo, f_lo
        lo /= cfg.bracket_growth
        if lo < LAMBDA_FLOOR:
            logger.debug("lambda_min bracket passed %g at %s; switching to log coordinates", LAMBDA_FLOOR, point)
            return _solve_log_lambda_min(point, cfg)
        f_lo = f(lo)

    result = bracketed_root(f, lo, hi, cfg.tolerance, cfg.max_iterations, f_lo, f_hi)
    return RootResult(
        math.log(result.root),
        result.value,
        result.iterations,
        (math.log(result.bracket[0]), math.log(result.bracket[1])),
    )


def lambda_max(point: GridPoint, cfg: Optional[SolverConfig] = None) -> float:
    return solve_lambda_max(point, cfg).root


def log_lambda_min(point: GridPoint, cfg: Optional[SolverConfig] = None) -> float:
    return solve_log_lambda_min(point, cfg).root


def lambda_min(point: GridPoint, cfg: Optional[SolverConfig] = None) -> float:
    """lambda_min in (0, 1-rho]; raises LambdaUnderflowError if it is below the float range."""
    t = log_lambda_min(point, cfg)
    value = math.exp(t)
    if value == 0.0:
        raise LambdaUnderflowError(f"lambda_min = exp({t!r}) underflows at {point}; use log_lambda_min")
    return min(value, 1.0 - point.rho)


def ric_bounds(point: GridPoint, cfg: Optional[SolverConfig] = None) -> RicPair:
    """Implicit bounds at one grid point; never raises for lambda_min underflow.

    ``lower`` saturates at 1.0 when lambda_min falls below float64 resolution
    and ``lambda_min`` becomes 0.0 below ~1e-308. ``log_lower_gap`` and
    ``log_lambda_min`` keep the exact value in both cases.
    """
    cfg = _config(cfg)
    upper_root = solve_lambda_max(point, cfg)
    lower_root = solve_log_lambda_min(point, cfg)
    t = lower_root.root
    return RicPair(
        lower=-math.expm1(t),
        upper=upper_root.root - 1.0,
        method="implicit",
        residual=max(abs(lower_root.value), abs(upper_root.value)),
        residual_min=abs(lower_root.value),
        residual_max=abs(upper_root.value),
        log_lower_gap=t,
        lambda_min=math.exp(t),
        log_lambda_min=t,
        lambda_max=upper_root.root,
    )


def tail_exponent(side: Side, lam: float, point: GridPoint, n: int) -> float:
    """Exponent 2n Psi_side(lambda) of the tail probability bound.

    Only the exponential rate is returned; the polynomial prefactor in n and
    lambda is not modelled.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    if side == "max" and lam < 1.0 + point.rho:
        raise DomainError(f"upper-tail exponent needs lambda >= 1+rho, got {lam!r}")
    if side == "min" and not (0.0 < lam <= 1.0 - point.rho):
        raise DomainError(f"lower-tail exponent needs 0 < lambda <= 1-rho, got {lam!r}")
    return 2.0 * n * big_psi_value(side, lam, point.delta, point.rho)
