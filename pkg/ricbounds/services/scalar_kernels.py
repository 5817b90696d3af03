"""Entropy and large-deviation exponent kernels.

All logarithms are natural. The kernels are plain float functions so the root
finders can call them in tight loops; ``big_psi`` wraps the result in an
``ExponentValue`` for callers that want the side attached.
"""

from __future__ import annotations

import math

from ricbounds.core.errors import DomainError
from ricbounds.core.models import ExponentValue, GridPoint, Side


def shannon_entropy(p: float) -> float:
    """H(p) = -p log p - (1-p) log(1-p).

    Both logs are taken from whichever of p and 1-p is exactly representable,
    so values near 0 and near 1 keep full relative accuracy.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"entropy argument must lie in (0, 1), got {p!r}")
    if p <= 0.5:
        log_p = math.log(p)
        log_q = math.log1p(-p)
    else:
        # p - 1 is exact for p >= 0.5
        log_p = math.log1p(p - 1.0)
        log_q = math.log(1.0 - p)
    return -p * log_p - (1.0 - p) * log_q


def _log1p_neg_ratio(p: float) -> float:
    """-log(1-p)/p, tending to 1 as p -> 0."""
    if p == 0.0:
        return 1.0
    return -math.log1p(-p) / p


def entropy_rate(delta: float, rho: float) -> float:
    """delta^-1 H(delta rho) without forming H at tiny arguments.

    Uses delta^-1 H(delta rho) = rho [-log(delta rho)] + rho (1 - delta rho) r(delta rho)
    with r(p) = -log(1-p)/p, and log(delta rho) taken as log delta + log rho so
    that delta rho may underflow.
    """
    p = delta * rho
    return rho * (-(math.log(delta) + math.log(rho))) + rho * (1.0 - p) * _log1p_neg_ratio(p)


def _check_rho(rho: float) -> None:
    if not (0.0 < rho < 1.0):
        raise DomainError(f"rho must lie in (0, 1), got {rho!r}")


def psi_min_log(log_lam: float, rho: float) -> float:
    """psi_min evaluated from log(lambda); lambda itself may be below the float range."""
    _check_rho(rho)
    lam = math.exp(log_lam)
    return shannon_entropy(rho) + 0.5 * ((1.0 - rho) * log_lam + 1.0 - rho + rho * math.log(rho) - lam)


def psi_min(lam: float, rho: float) -> float:
    if not lam > 0.0:
        raise DomainError(f"psi_min needs lambda > 0, got {lam!r}")
    _check_rho(rho)
    return shannon_entropy(rho) + 0.5 * ((1.0 - rho) * math.log(lam) + 1.0 - rho + rho * math.log(rho) - lam)


def psi_max_log(log_lam: float, rho: float) -> float:
    _check_rho(rho)
    return 0.5 * ((1.0 + rho) * log_lam + 1.0 + rho - rho * math.log(rho) - math.exp(log_lam))


def psi_max(lam: float, rho: float) -> float:
    if not lam > 0.0:
        raise DomainError(f"psi_max needs lambda > 0, got {lam!r}")
    _check_rho(rho)
    return 0.5 * ((1.0 + rho) * math.log(lam) + 1.0 + rho - rho * math.log(rho) - lam)


def big_psi_value(side: Side, lam: float, delta: float, rho: float) -> float:
    """Psi_side(lambda, delta, rho) as a bare float."""
    kernel = psi_min if side == "min" else psi_max
    return kernel(lam, rho) + entropy_rate(delta, rho)


def big_psi_log_value(side: Side, log_lam: float, delta: float, rho: float) -> float:
    kernel = psi_min_log if side == "min" else psi_max_log
    return kernel(log_lam, rho) + entropy_rate(delta, rho)


def big_psi(side: Side, lam: float, point: GridPoint) -> ExponentValue:
    return ExponentValue(value=big_psi_value(side, lam, point.delta, point.rho), side=side)


def big_psi_log(side: Side, log_lam: float, point: GridPoint) -> ExponentValue:
    return ExponentValue(value=big_psi_log_value(side, log_lam, point.delta, point.rho), side=side)
