"""Closed-form RIC bounds for the small-rho, small-delta and gamma-path regimes.

Every formula takes log(1/(delta^2 rho^3)) as -2 log delta - 3 log rho so that
delta down to 1e-300 never overflows. Constants outside a regime's proven range
emit ``RegimeWarning`` and the formula is still evaluated. Callers that report
validity themselves pass ``warn=False``; ``regime_valid`` is set either way.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import Tuple

from ricbounds.core.errors import DomainError, RegimeWarning
from ricbounds.core.models import GridPoint, RicPair


logger = logging.getLogger(__name__)

GAMMA_MIN = 4.0
LITERAL_LOWER_NOTE = "lower uses the literal rho log(1/(delta^2 rho^3)) + 6 rho term"
DEFAULT_LOWER_NOTE = "lower uses x = 2 rho log(1/(delta^2 rho^3)) + 6 rho, matching the gamma limit"


def log_inv_d2r3(delta: float, rho: float) -> float:
    """log(1/(delta^2 rho^3))."""
    return -2.0 * math.log(delta) - 3.0 * math.log(rho)


def _warn(message: str) -> None:
    warnings.warn(message, RegimeWarning, stacklevel=3)


def bounds_small_rho(point: GridPoint, c: float = 6.0, warn: bool = True) -> RicPair:
    """sqrt(2 rho log(1/(delta^2 rho^3)) + c rho) for both sides."""
    valid = c > 6.0
    if not valid and warn:
        _warn(f"small-rho bound is proven for c > 6; got c={c}")
    log_term = log_inv_d2r3(point.delta, point.rho)
    if log_term <= 0.0:
        raise DomainError(f"delta^2 rho^3 >= 1 at {point}")
    radicand = 2.0 * point.rho * log_term + c * point.rho
    if radicand < 0.0:
        raise DomainError(f"negative radicand {radicand!r} for c={c}")
    value = math.sqrt(radicand)
    return RicPair(
        lower=value,
        upper=value,
        method="small_rho",
        log_lower_gap=math.log1p(-value) if value < 1.0 else None,
        regime_valid=valid,
    )


def small_delta_log_gap(point: GridPoint, c: float) -> float:
    """log of exp(-(3 rho + c)/(1-rho)) (delta^2 rho^3)^(rho/(1-rho))."""
    rho = point.rho
    return -(3.0 * rho + c) / (1.0 - rho) - (rho / (1.0 - rho)) * log_inv_d2r3(point.delta, rho)


def bounds_small_delta(point: GridPoint, c: float = 1.0, warn: bool = True) -> RicPair:
    """Small-delta bounds; the lower side is returned with its log gap."""
    valid = c > 1.0
    if not valid and warn:
        _warn(f"small-delta bound is proven for c > 1; got c={c}")
    rho = point.rho
    log_term = log_inv_d2r3(point.delta, rho)
    inner = c * log_term
    if inner <= 1.0:
        raise DomainError(f"c log(1/(delta^2 rho^3)) = {inner!r} must exceed 1")
    upper = rho * log_term + (1.0 + rho) * math.log(inner) + 3.0 * rho
    log_gap = small_delta_log_gap(point, c)
    return RicPair(
        lower=-math.expm1(log_gap),
        upper=upper,
        method="small_delta",
        log_lower_gap=log_gap,
        regime_valid=valid,
    )


def rho_gamma(delta: float, gamma: float) -> float:
    """rho on the gamma path: 1/(gamma log(1/delta))."""
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    return 1.0 / (gamma * -math.log(delta))


def bounds_gamma_path(
    delta: float,
    gamma: float,
    c_u: float = 1.0 / 3.0,
    c_l: float = 1.0 / 3.0,
    literal_lower: bool = False,
    warn: bool = True,
) -> RicPair:
    """Bounds along rho = rho_gamma(delta).

    With x = 2 rho log(1/(delta^2 rho^3)) + 6 rho: upper = sqrt(x) + c_u x and
    lower = sqrt(x) - c_l x. ``literal_lower`` swaps the lower correction term
    for c_l (rho log(1/(delta^2 rho^3)) + 6 rho).
    """
    rho = rho_gamma(delta, gamma)
    if rho >= 1.0:
        raise DomainError(f"rho_gamma({delta!r}, {gamma!r}) = {rho!r} is not below 1")
    valid = gamma > GAMMA_MIN and c_u > 1.0 / 3.0 and c_l < 1.0 / 3.0
    if not valid and warn:
        _warn(f"gamma-path bound is proven for gamma > 4, c_u > 1/3, c_l < 1/3; got {gamma}, {c_u}, {c_l}")
    log_term = log_inv_d2r3(delta, rho)
    x = 2.0 * rho * log_term + 6.0 * rho
    root_x = math.sqrt(x)
    if literal_lower:
        lower = root_x - c_l * (rho * log_term + 6.0 * rho)
        note = LITERAL_LOWER_NOTE
    else:
        lower = root_x - c_l * x
        note = DEFAULT_LOWER_NOTE
    return RicPair(
        lower=lower,
        upper=root_x + c_u * x,
        method="gamma_path",
        log_lower_gap=math.log1p(-lower) if lower < 1.0 else None,
        regime_valid=valid,
        notes=(note,),
    )


def gamma_limit_bounds(gamma: float, c_u: float = 1.0 / 3.0, c_l: float = 1.0 / 3.0) -> RicPair:
    """Limits of the gamma-path bounds as delta -> 0: 2/sqrt(gamma) +/- 4c/gamma."""
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    lead = 2.0 / math.sqrt(gamma)
    lower = lead - 4.0 * c_l / gamma
    return RicPair(
        lower=lower,
        upper=lead + 4.0 * c_u / gamma,
        method="gamma_limit",
        log_lower_gap=math.log1p(-lower) if lower < 1.0 else None,
        regime_valid=gamma > GAMMA_MIN and c_u > 1.0 / 3.0 and c_l < 1.0 / 3.0,
    )


def wishart_edges(rho: float) -> Tuple[float, float]:
    """Deviations of the Marchenko-Pastur edges from one: (1-(1-sqrt rho)^2, (1+sqrt rho)^2-1)."""
    if not (0.0 < rho <= 1.0):
        raise DomainError(f"rho must lie in (0, 1], got {rho!r}")
    root = math.sqrt(rho)
    return 1.0 - (1.0 - root) ** 2, (1.0 + root) ** 2 - 1.0
