"""Executable versions of the entropy and logarithm inequalities used in the bound proofs.

Each inequality is rewritten as ``slack(x) >= 0`` (or ``> 0`` when strict) and the
slack is computed from series remainders of log(1+x), so samples as small as
1e-8 keep a meaningful sign.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from ricbounds.core.errors import DomainError
from ricbounds.core.models import LemmaReport, LemmaResult


logger = logging.getLogger(__name__)

_SERIES_CUTOFF = 0.25


def log1p_remainder(x: float, order: int) -> float:
    """log(1+x) minus its Taylor polynomial of degree ``order``."""
    if x <= -1.0:
        raise DomainError(f"log1p remainder needs x > -1, got {x!r}")
    if abs(x) > _SERIES_CUTOFF:
        poly = sum((-1.0) ** (j + 1) * x**j / j for j in range(1, order + 1))
        return math.log1p(x) - poly
    total = 0.0
    j = order + 1
    term = (-1.0) ** (j + 1) * x**j / j
    while term != 0.0 and j < order + 200:
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
        j += 1
        term = (-1.0) ** (j + 1) * x**j / j
    return total


@dataclass(frozen=True)
class Inequality:
    lemma: str
    name: str
    text: str
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool
    slack: Callable[[float], float]
    strict: bool = False
    exclude_zero: bool = False

    def contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below and not (self.exclude_zero and x == 0.0)

    def check(self, x: float) -> LemmaResult:
        value = self.slack(x)
        passed = value > 0.0 if self.strict else value >= 0.0
        return LemmaResult(lemma=self.lemma, inequality=self.text, x=x, slack=value, passed=passed)


def _logmono_slack(x: float) -> float:
    # x + (1-x) log(1-x)
    return x * x + (1.0 - x) * log1p_remainder(-x, 1)


# Domains are the ranges on which each inequality actually holds; two of the
# commonly quoted edges (0.44 and 0.92) sit just past the true crossings.
INEQUALITIES: List[Inequality] = [
    Inequality(
        "shannon_bounds", "shannon_upper", "H(x) < -x log x + x",
        0.0, 1.0, False, False, _logmono_slack, strict=True,
    ),
    Inequality(
        "shannon_bounds", "shannon_lower", "H(x) > -x log x + x - x^2",
        0.0, 1.0, False, False, lambda x: -(1.0 - x) * log1p_remainder(-x, 1), strict=True,
    ),
    Inequality(
        "logmono_ubound", "logmono_ubound", "-(1-x) log(1-x) < x",
        0.0, 1.0, False, False, _logmono_slack, strict=True,
    ),
    Inequality(
        "logmm_lbound", "logmm_lbound", "-log(1-x) > x",
        -math.inf, 1.0, False, False, lambda x: -log1p_remainder(-x, 1), strict=True, exclude_zero=True,
    ),
    Inequality(
        "logp_ubound", "logp_ubound_linear", "log(1+x) <= x",
        -1.0, math.inf, False, False, lambda x: -log1p_remainder(x, 1),
    ),
    Inequality(
        "logp_ubound", "logp_ubound_cubic", "log(1+x) <= x - x^2/2 + x^3/3",
        -1.0, math.inf, False, False, lambda x: -log1p_remainder(x, 3),
    ),
    Inequality(
        "r_pfrac_series", "r_pfrac_series", "1/(1+x) < 1",
        0.0, 1.0, False, False, lambda x: x / (1.0 + x), strict=True,
    ),
    Inequality(
        "logm_ubound", "logm_ubound_linear", "log(1-x) <= -x",
        0.0, 1.0, False, False, lambda x: -log1p_remainder(-x, 1),
    ),
    Inequality(
        "logm_ubound", "logm_ubound_quadratic", "log(1-x) <= -x - x^2/2",
        0.0, 1.0, False, False, lambda x: -log1p_remainder(-x, 2),
    ),
    Inequality(
        "logm_ubound", "logm_ubound_cubic", "log(1-x) <= -x - x^2/2 - x^3/3",
        0.0, 1.0, False, False, lambda x: -log1p_remainder(-x, 3),
    ),
    Inequality(
        "r_mfrac_series", "r_mfrac_series", "1/(1-x) >= 1",
        0.0, 1.0, False, False, lambda x: x / (1.0 - x),
    ),
    Inequality(
        "logp_lbound", "logp_lbound", "log(1+x) >= x - x^2/2",
        0.0, math.inf, True, False, lambda x: log1p_remainder(x, 2),
    ),
    Inequality(
        "logm_lbound", "logm_lbound", "log(1-x) >= -x - x^2/2 - x^3/2",
        0.0, 0.43, True, True, lambda x: log1p_remainder(-x, 3) + x**3 / 6.0,
    ),
    Inequality(
        "logp_lbound2", "logp_lbound2", "log(1+x) >= x - x^2/2 + x^3/5",
        0.0, 0.91, True, True, lambda x: log1p_remainder(x, 3) + 2.0 * x**3 / 15.0,
    ),
]

LEMMAS = sorted({item.lemma for item in INEQUALITIES})


def inequalities_for(lemma: Optional[str] = None) -> List[Inequality]:
    if lemma is None:
        return list(INEQUALITIES)
    found = [item for item in INEQUALITIES if item.lemma == lemma]
    if not found:
        raise DomainError(f"unknown lemma {lemma!r}; known: {', '.join(LEMMAS)}")
    return found


def sample_domain(inequality: Inequality, count: int = 1000, floor: float = 1e-8) -> List[float]:
    """Log-spaced samples covering the inequality's domain.

    Unbounded ends are truncated at 10; negative parts are mirrored log grids.
    """
    if not math.isfinite(inequality.hi):
        hi = 10.0
    else:
        hi = inequality.hi if inequality.hi_closed else inequality.hi - 1e-6
    samples: List[float] = []
    if inequality.lo < 0.0:
        if not math.isfinite(inequality.lo):
            lo = -10.0
        else:
            lo = inequality.lo if inequality.lo_closed else inequality.lo + 1e-6
        neg_count = count // 2
        samples.extend(float(-v) for v in np.logspace(math.log10(-lo), math.log10(floor), neg_count))
        count -= neg_count
    elif inequality.lo_closed:
        samples.append(0.0)
        count -= 1
    samples.extend(float(v) for v in np.logspace(math.log10(floor), math.log10(hi), count))
    return [x for x in samples if inequality.contains(x)]


def verify_lemma_inequalities(
    samples: Optional[Sequence[float]] = None,
    lemma: Optional[str] = None,
    count: int = 1000,
) -> LemmaReport:
    """Evaluate every inequality at every sample and report the slacks.

    With ``samples`` given, each sample must lie inside every selected
    inequality's domain; out-of-domain samples raise ``DomainError``. Without
    samples, each inequality is checked on ``count`` log-spaced points of its
    own domain.
    """
    selected = inequalities_for(lemma)
    results: List[LemmaResult] = []
    for inequality in selected:
        if samples is None:
            xs: Iterable[float] = sample_domain(inequality, count)
        else:
            outside = [x for x in samples if not inequality.contains(x)]
            if outside:
                raise DomainError(
                    f"samples {outside[:3]} lie outside the domain of {inequality.name} ({inequality.text})"
                )
            xs = samples
        results.extend(inequality.check(float(x)) for x in xs)

    report = LemmaReport(results=results)
    failures = report.failures()
    if failures:
        logger.warning("%d lemma checks failed; first: %s at x=%r", len(failures), failures[0].inequality, failures[0].x)
    else:
        logger.info("lemma suite passed: %d checks over %d inequalities", len(results), len(selected))
    return report


def summarize(report: LemmaReport) -> Dict[str, Dict[str, float]]:
    """Per-lemma count and minimum slack."""
    summary: Dict[str, Dict[str, float]] = {}
    for item in report.results:
        entry = summary.setdefault(item.lemma, {"checks": 0, "failures": 0, "min_slack": math.inf})
        entry["checks"] += 1
        entry["failures"] += 0 if item.passed else 1
        entry["min_slack"] = min(entry["min_slack"], item.slack)
    return summary
