"""Empirical lower/upper RICs of a sampled matrix and their comparison with the bounds.

Exhaustive mode walks every k-subset of columns in lexicographic order; the
rank space is cut into contiguous ranges, one per worker. Monte-Carlo mode
draws distinct supports from stream 1 of the counter generator, rejecting
repeats. Either way the reduction is a min/max with ties broken by the
earliest support, so results do not depend on the worker count.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from ricbounds.core.errors import DomainError, EnumerationCapError
from ricbounds.core.models import (
    EmpiricalEstimate,
    EnumerationMode,
    MatrixSample,
    ProblemSize,
    RicPair,
    ValidationLine,
    ValidationReport,
)
from ricbounds.core.settings import get_settings
from ricbounds.services.combinations import iter_combinations, split_ranks
from ricbounds.services.counter_rng import CounterRng
from ricbounds.services.gaussian_matrix import sample_gaussian
from ricbounds.services.implicit_bounds import ric_bounds
from ricbounds.services.jacobi import gram_extremes
from ricbounds.services.job_manager import run_jobs
from ricbounds.services.sampling_theorems import problem_size, to_grid_point


logger = logging.getLogger(__name__)

SUPPORT_STREAM = 1
EXCEEDS = "exceeds (asymptotic bound; finite-n excursion)"
CONSISTENT = "consistent"
_CHUNK = 4096


@dataclass
class _Extremes:
    lam_min: float = math.inf
    min_support: Tuple[int, ...] = ()
    lam_max: float = -math.inf
    max_support: Tuple[int, ...] = ()
    count: int = 0

    def update(self, support: Tuple[int, ...], lo: float, hi: float) -> None:
        self.count += 1
        if lo < self.lam_min:
            self.lam_min, self.min_support = lo, support
        if hi > self.lam_max:
            self.lam_max, self.max_support = hi, support

    def merge(self, other: "_Extremes") -> None:
        # callers merge in support order, so strict comparisons keep the earliest tie
        self.count += other.count
        if other.lam_min < self.lam_min:
            self.lam_min, self.min_support = other.lam_min, other.min_support
        if other.lam_max > self.lam_max:
            self.lam_max, self.max_support = other.lam_max, other.max_support


def _scan(entries: np.ndarray, supports) -> _Extremes:
    acc = _Extremes()
    for support in supports:
        lo, hi = gram_extremes(entries[:, list(support)])
        acc.update(support, lo, hi)
    return acc


def draw_supports(N: int, k: int, budget: int, seed: int) -> List[Tuple[int, ...]]:
    """``budget`` distinct sorted supports, uniform over all k-subsets, deterministic in ``seed``."""
    total = math.comb(N, k)
    if budget > total:
        logger.warning("budget %d exceeds the %d available supports; clamping", budget, total)
        budget = total
    rng = CounterRng(seed, stream=SUPPORT_STREAM)
    seen: Set[Tuple[int, ...]] = set()
    supports: List[Tuple[int, ...]] = []
    while len(supports) < budget:
        pool = list(range(N))
        # partial Fisher-Yates
        for i in range(k):
            j = i + rng.below(N - i)
            pool[i], pool[j] = pool[j], pool[i]
        support = tuple(sorted(pool[:k]))
        if support in seen:
            continue
        seen.add(support)
        supports.append(support)
    return supports


def empirical_ric(
    matrix: MatrixSample,
    k: int,
    mode: EnumerationMode = "exhaustive",
    budget: int = 10_000,
    seed: int = 0,
    workers: Optional[int] = None,
    exhaustive_cap: Optional[int] = None,
    progress: bool = False,
) -> EmpiricalEstimate:
    """Empirical RICs 1 - min lambda_min and max lambda_max - 1 over the evaluated supports."""
    if not (1 <= k <= matrix.n):
        raise DomainError(f"need 1 <= k <= n={matrix.n}, got k={k!r}")
    size = ProblemSize(k=k, n=matrix.n, N=matrix.N)
    total = math.comb(matrix.N, k)
    entries = matrix.entries

    if mode == "exhaustive":
        cap = get_settings().exhaustive_cap if exhaustive_cap is None else exhaustive_cap
        if total > cap:
            raise EnumerationCapError(total, cap)
        parts = max(1, min(-(-total // _CHUNK), 64))
        ranges = split_ranks(total, parts)
        partials = run_jobs(
            "empirical_exhaustive",
            lambda bounds: _scan(entries, iter_combinations(matrix.N, k, bounds[0], bounds[1])),
            ranges,
            workers=workers,
            progress=progress,
        )
    elif mode == "monte_carlo":
        if budget < 1:
            raise DomainError(f"budget must be >= 1, got {budget!r}")
        supports = draw_supports(matrix.N, k, budget, seed)
        chunks = [supports[i:i + _CHUNK] for i in range(0, len(supports), _CHUNK)]
        partials = run_jobs(
            "empirical_monte_carlo",
            lambda chunk: _scan(entries, chunk),
            chunks,
            workers=workers,
            progress=progress,
        )
    else:
        raise DomainError(f"unknown enumeration mode {mode!r}")

    acc = _Extremes()
    for partial in partials:
        acc.merge(partial)

    lower_hat = 1.0 - acc.lam_min
    flagged = lower_hat >= 1.0
    if flagged:
        logger.warning("empirical lower RIC %.6g is not below one (n=%d, N=%d, k=%d)", lower_hat, matrix.n, matrix.N, k)
    return EmpiricalEstimate(
        lower_hat=lower_hat,
        upper_hat=acc.lam_max - 1.0,
        mode=mode,
        subsets_evaluated=acc.count,
        seed=seed,
        size=size,
        lower_support=acc.min_support,
        upper_support=acc.max_support,
        flagged=flagged,
    )


def _line(side: str, empirical: float, bound: float) -> ValidationLine:
    status = CONSISTENT if empirical <= bound else EXCEEDS
    return ValidationLine(side=side, empirical=empirical, bound=bound, slack=bound - empirical, status=status)


def validation_report(estimate: EmpiricalEstimate, bounds: RicPair) -> ValidationReport:
    """Side-by-side empirical and bound values; excursions are reported, not raised."""
    return ValidationReport(
        size=estimate.size,
        mode=estimate.mode,
        subsets_evaluated=estimate.subsets_evaluated,
        method=bounds.method,
        lines=(
            _line("lower", estimate.lower_hat, bounds.lower),
            _line("upper", estimate.upper_hat, bounds.upper),
        ),
    )


def format_validation_report(report: ValidationReport) -> str:
    size = report.size
    lines = [
        f"k={size.k} n={size.n} N={size.N} mode={report.mode} supports={report.subsets_evaluated} bound={report.method}",
        f"{'side':<6} {'empirical':>14} {'bound':>14} {'slack':>14}  status",
    ]
    for line in report.lines:
        lines.append(f"{line.side:<6} {line.empirical:>14.8f} {line.bound:>14.8f} {line.slack:>14.8f}  {line.status}")
    return "\n".join(lines)


def exceedance_trials(
    n: int,
    N: int,
    k: int,
    seeds: Sequence[int],
    mode: EnumerationMode = "exhaustive",
    budget: int = 10_000,
    workers: Optional[int] = None,
) -> List[ValidationReport]:
    """One validation report per seed against the implicit bounds at (n/N, k/n)."""
    if not seeds:
        raise DomainError("at least one seed is required")
    bounds = ric_bounds(to_grid_point(problem_size(k, n, N)))
    reports: List[ValidationReport] = []
    for seed in seeds:
        estimate = empirical_ric(sample_gaussian(n, N, seed), k, mode=mode, budget=budget, seed=seed, workers=workers)
        reports.append(validation_report(estimate, bounds))
    return reports


def exceedance_study(
    n: int,
    N: int,
    k: int,
    seeds: Sequence[int],
    mode: EnumerationMode = "exhaustive",
    budget: int = 10_000,
    workers: Optional[int] = None,
) -> float:
    """Fraction of sampled matrices whose empirical upper RIC stays below the implicit bound."""
    reports = exceedance_trials(n, N, k, seeds, mode=mode, budget=budget, workers=workers)
    below = sum(not report.exceeds_upper for report in reports)
    lower_excursions = sum(report.exceeds_lower for report in reports)
    fraction = below / len(reports)
    logger.info(
        "upper RIC below bound in %d of %d trials, lower RIC above bound in %d (n=%d, N=%d, k=%d)",
        below, len(reports), lower_excursions, n, N, k,
    )
    return fraction
