"""Sign checks of the exponents at perturbed closed-form bounds.

For each regime the closed-form bound is perturbed by epsilon and Psi is
evaluated there. With the proven constant the exponent must be negative (the
bound holds with room to spare); with a tighter constant it must be
non-negative (the constant cannot be improved).
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, List, Literal, Sequence

from ricbounds.core.models import RegimeCheck, Side, grid_point
from ricbounds.services.asymptotic_bounds import (
    bounds_gamma_path,
    bounds_small_delta,
    bounds_small_rho,
    rho_gamma,
    small_delta_log_gap,
)
from ricbounds.services.scalar_kernels import big_psi_log_value, big_psi_value


logger = logging.getLogger(__name__)

Expected = Literal["negative", "nonnegative"]

SMALL_RHO_GRID = (1e-6, 1e-5, 1e-4)
SMALL_DELTA_GRID = (1e-10, 1e-20, 1e-30)
GAMMA_PATH_GRID = (1e-20, 1e-40, 1e-80)


def _record(theorem: str, part: int, side: Side, delta: float, rho: float, constant: float,
            trial: float, exponent: float) -> RegimeCheck:
    expected: Expected = "negative" if part == 1 else "nonnegative"
    return RegimeCheck(
        theorem=theorem, part=part, side=side, delta=delta, rho=rho,
        constant=constant, trial=trial, exponent=exponent, expected=expected,
    )


def small_rho_checks(
    delta: float = 0.25,
    rhos: Sequence[float] = SMALL_RHO_GRID,
    loose: float = 6.5,
    tight: float = 5.0,
    epsilon: float = 0.1,
) -> List[RegimeCheck]:
    """Multiplicative (1 +/- epsilon) slack around 1 +/- the small-rho bound."""
    checks: List[RegimeCheck] = []
    for rho in rhos:
        point = grid_point(delta, rho)
        for part, c in ((1, loose), (2, tight)):
            value = bounds_small_rho(point, c, warn=False).upper
            lam_max = 1.0 + value
            lam_min = 1.0 - value
            if part == 1:
                trial_max = (1.0 + epsilon) * lam_max - epsilon
                trial_min = (1.0 + epsilon) * lam_min - epsilon
            else:
                trial_max = (1.0 - epsilon) * lam_max + epsilon
                trial_min = (1.0 - epsilon) * lam_min + epsilon
            checks.append(_record("small_rho", part, "max", delta, rho, c, trial_max,
                                  big_psi_value("max", trial_max, delta, rho)))
            checks.append(_record("small_rho", part, "min", delta, rho, c, trial_min,
                                  big_psi_value("min", trial_min, delta, rho)))
    return checks


def small_delta_checks(
    deltas: Sequence[float] = SMALL_DELTA_GRID,
    upper_rho: float = 0.5,
    lower_rho: float = 0.1,
    loose: float = 1.5,
    upper_tight: float = 0.4,
    lower_tight: float = 0.5,
    epsilon: float = 0.1,
) -> List[RegimeCheck]:
    """Additive epsilon on the upper side; multiplicative (1 +/- epsilon) on the lower side.

    lambda_min is far below epsilon in this regime, so the lower trial is taken
    in log coordinates.
    """
    checks: List[RegimeCheck] = []
    for delta in deltas:
        point = grid_point(delta, upper_rho)
        for part, c, shift in ((1, loose, epsilon), (2, upper_tight, -epsilon)):
            trial = 1.0 + bounds_small_delta(point, c, warn=False).upper + shift
            checks.append(_record("small_delta", part, "max", delta, upper_rho, c, trial,
                                  big_psi_value("max", trial, delta, upper_rho)))

        point = grid_point(delta, lower_rho)
        for part, c, factor in ((1, loose, 1.0 + epsilon), (2, lower_tight, 1.0 - epsilon)):
            log_trial = small_delta_log_gap(point, c) + math.log(factor)
            checks.append(_record("small_delta", part, "min", delta, lower_rho, c, math.exp(log_trial),
                                  big_psi_log_value("min", log_trial, delta, lower_rho)))
    return checks


def gamma_path_checks(
    deltas: Sequence[float] = GAMMA_PATH_GRID,
    gamma: float = 300.0,
    upper_loose: float = 0.4,
    upper_tight: float = 0.2,
    lower_loose: float = 0.2,
    lower_tight: float = 0.5,
    epsilon: float = 0.01,
) -> List[RegimeCheck]:
    checks: List[RegimeCheck] = []
    for delta in deltas:
        rho = rho_gamma(delta, gamma)
        for part, c_u, shift in ((1, upper_loose, epsilon), (2, upper_tight, -epsilon)):
            trial = 1.0 + bounds_gamma_path(delta, gamma, c_u=c_u, warn=False).upper + shift
            checks.append(_record("gamma_path", part, "max", delta, rho, c_u, trial,
                                  big_psi_value("max", trial, delta, rho)))
        for part, c_l, shift in ((1, lower_loose, -epsilon), (2, lower_tight, epsilon)):
            trial = 1.0 - bounds_gamma_path(delta, gamma, c_l=c_l, warn=False).lower + shift
            checks.append(_record("gamma_path", part, "min", delta, rho, c_l, trial,
                                  big_psi_value("min", trial, delta, rho)))
    return checks


def run_regime_suite(epsilon: float = 0.1, gamma_epsilon: float = 0.01) -> List[RegimeCheck]:
    """All three regimes; tight constants deliberately sit outside the proven ranges."""
    checks = (
        small_rho_checks(epsilon=epsilon)
        + small_delta_checks(epsilon=epsilon)
        + gamma_path_checks(epsilon=gamma_epsilon)
    )
    failed = failures(checks)
    if failed:
        logger.warning("%d of %d regime sign checks failed", len(failed), len(checks))
    else:
        logger.info("regime sign checks passed: %d", len(checks))
    return checks


def failures(checks: Iterable[RegimeCheck]) -> List[RegimeCheck]:
    return [check for check in checks if not check.passed]
