import math
import time

import mpmath
import numpy as np
import pytest

from ricbounds.core.errors import DomainError, NonConvergenceError, SolverError
from ricbounds.core.models import SolverConfig, grid_point
from ricbounds.services.implicit_bounds import (
    LambdaUnderflowError,
    lambda_max,
    lambda_min,
    log_lambda_min,
    ric_bounds,
    solve_lambda_max,
    solve_log_lambda_min,
    tail_exponent,
)
from ricbounds.services.scalar_kernels import big_psi_log_value, big_psi_value

mpmath.mp.dps = 40


def _oracle(side, delta, rho, bracket):
    delta, rho = mpmath.mpf(delta), mpmath.mpf(rho)

    def h(p):
        return -p * mpmath.log(p) - (1 - p) * mpmath.log(1 - p)

    def f(lam):
        if side == "min":
            psi = h(rho) + ((1 - rho) * mpmath.log(lam) + 1 - rho + rho * mpmath.log(rho) - lam) / 2
        else:
            psi = ((1 + rho) * mpmath.log(lam) + 1 + rho - rho * mpmath.log(rho) - lam) / 2
        return psi + h(delta * rho) / delta

    return float(mpmath.findroot(f, bracket, solver="anderson"))


def test_reference_point_matches_oracle(reference_point, solver_config):
    lam_max = lambda_max(reference_point, solver_config)
    lam_min = lambda_min(reference_point, solver_config)
    assert lam_max > 1.1
    assert 0.0 < lam_min < 0.9
    assert lam_max == pytest.approx(_oracle("max", 0.25, 0.1, (1.1, 10.0)), rel=1e-10)
    assert lam_min == pytest.approx(_oracle("min", 0.25, 0.1, (1e-6, 0.9)), rel=1e-10)


def test_roots_have_small_residual(reference_point, solver_config):
    lam_max = lambda_max(reference_point, solver_config)
    lam_min = lambda_min(reference_point, solver_config)
    assert abs(big_psi_value("max", lam_max, 0.25, 0.1)) <= 1e-12 + 1e-14
    assert abs(big_psi_value("min", lam_min, 0.25, 0.1)) <= 1e-12 + 1e-14


def test_ric_bounds_reference_point(reference_point, solver_config):
    bounds = ric_bounds(reference_point, solver_config)
    assert bounds.method == "implicit"
    assert 0.0 < bounds.lower < 1.0
    assert bounds.upper > 0.0
    assert bounds.residual_min <= 1e-12
    assert bounds.residual_max <= 1e-12
    assert bounds.residual == max(bounds.residual_min, bounds.residual_max)
    assert bounds.lower == pytest.approx(1.0 - lambda_min(reference_point, solver_config), rel=1e-14)
    assert bounds.upper == pytest.approx(lambda_max(reference_point, solver_config) - 1.0, rel=1e-14)
    assert bounds.lower_gap == pytest.approx(bounds.lambda_min, rel=1e-14)


def test_lambda_max_decreases_with_rho(solver_config):
    roots = [lambda_max(grid_point(0.25, rho), solver_config) for rho in (0.1, 0.01, 0.001)]
    assert roots[0] > roots[1] > roots[2]


def test_bounds_increase_with_rho(solver_config):
    pairs = [ric_bounds(grid_point(0.25, rho), solver_config) for rho in (1e-4, 1e-3, 1e-2, 1e-1)]
    lowers = [pair.lower for pair in pairs]
    uppers = [pair.upper for pair in pairs]
    assert all(a < b for a, b in zip(lowers, lowers[1:]))
    assert all(a < b for a, b in zip(uppers, uppers[1:]))


def test_solver_grid(solver_config):
    deltas = np.logspace(-30, -1, 20)
    rhos = np.logspace(-6, math.log10(0.9), 10)
    start = time.perf_counter()
    for delta in deltas:
        for rho in rhos:
            point = grid_point(float(delta), float(rho))
            bounds = ric_bounds(point, solver_config)
            assert bounds.residual <= 1e-12, point
            assert bounds.lambda_max >= 1.0 + point.rho
            assert bounds.log_lambda_min <= math.log1p(-point.rho) + 1e-15
            assert 0.0 <= bounds.lower <= 1.0
            if bounds.log_lambda_min > -36.0:
                assert bounds.lower < 1.0
            assert bounds.upper > 0.0
    assert time.perf_counter() - start < 5.0


@pytest.mark.parametrize("delta,rho", [(0.25, 0.1), (0.5, 0.5), (1e-3, 1e-4), (1e-25, 0.3)])
def test_root_independent_of_bracket_growth(delta, rho):
    point = grid_point(delta, rho)
    max_roots = [lambda_max(point, SolverConfig(bracket_growth=g)) for g in (1.5, 2.0, 4.0)]
    min_roots = [log_lambda_min(point, SolverConfig(bracket_growth=g)) for g in (1.5, 2.0, 4.0)]
    assert max(max_roots) - min(max_roots) <= 1e-10 * max_roots[0]
    assert max(min_roots) - min(min_roots) <= 1e-10 * max(1.0, abs(min_roots[0]))


@pytest.mark.parametrize("delta,rho", [(0.25, 0.1), (0.5, 0.01), (1e-10, 0.5), (1e-30, 0.9), (0.9, 0.9)])
def test_exponents_negative_past_roots(delta, rho, solver_config):
    point = grid_point(delta, rho)
    lam_max = lambda_max(point, solver_config)
    t_min = log_lambda_min(point, solver_config)
    assert big_psi_value("max", lam_max + 1e-3, delta, rho) < 0.0
    assert big_psi_log_value("min", t_min + math.log1p(-1e-3), delta, rho) < 0.0


def test_lambda_min_small_delta_form(solver_config):
    delta, rho, c = 1e-30, 0.1, 1.0
    expected = (rho / (1.0 - rho)) * (2.0 * math.log(delta) + 3.0 * math.log(rho)) - (3.0 * rho + c) / (1.0 - rho)
    t = log_lambda_min(grid_point(delta, rho), solver_config)
    assert abs(t - expected) < math.log(1.1)


def test_lambda_min_underflow(solver_config):
    point = grid_point(1e-30, 0.9)
    t = log_lambda_min(point, solver_config)
    assert t < -745.0
    with pytest.raises(LambdaUnderflowError):
        lambda_min(point, solver_config)
    bounds = ric_bounds(point, solver_config)
    assert bounds.lower == 1.0
    assert bounds.log_lower_gap == t


def test_lower_saturates_at_one_instead_of_raising(solver_config):
    # ric_bounds relaxes lower < 1 to lower <= 1 in float64; the log gap stays exact
    point = grid_point(1e-30, 0.9)
    bounds = ric_bounds(point, solver_config)
    assert bounds.lower == 1.0
    assert bounds.lambda_min == 0.0
    assert bounds.log_lower_gap < -745.0
    assert bounds.lower_gap == 0.0
    assert bounds.log_lambda_min == bounds.log_lower_gap
    assert bounds.residual_min <= 1e-12


def test_log_coordinate_search_near_rho_one(solver_config):
    # rho near one forces the log-coordinate search
    near_one = grid_point(0.3, 0.995)
    result = solve_log_lambda_min(near_one, solver_config)
    assert abs(big_psi_log_value("min", result.root, 0.3, 0.995)) <= 1e-12
    assert result.bracket[0] <= result.root <= result.bracket[1]


def test_non_convergence_reports_bracket(reference_point):
    cfg = SolverConfig(tolerance=1e-300, max_iterations=1)
    with pytest.raises(NonConvergenceError) as info:
        solve_lambda_max(reference_point, cfg)
    assert info.value.bracket is not None
    assert isinstance(info.value, SolverError)


def test_tail_exponent(reference_point, solver_config):
    lam = lambda_max(reference_point, solver_config)
    assert abs(tail_exponent("max", lam, reference_point, 100)) <= 2 * 100 * (1e-12 + 1e-14)
    beyond = tail_exponent("max", lam + 0.1, reference_point, 100)
    assert beyond < 0.0
    assert tail_exponent("max", lam + 0.1, reference_point, 200) == pytest.approx(2.0 * beyond, rel=1e-15)
    lam_lo = lambda_min(reference_point, solver_config)
    assert tail_exponent("min", lam_lo / 2.0, reference_point, 10) < 0.0


@pytest.mark.parametrize(
    "side,lam,n",
    [("max", 1.05, 10), ("min", 0.95, 10), ("min", 0.0, 10), ("max", 3.0, 0)],
)
def test_tail_exponent_domain(reference_point, side, lam, n):
    with pytest.raises(DomainError):
        tail_exponent(side, lam, reference_point, n)
