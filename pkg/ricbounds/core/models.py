"""Domain models shared across the bound, sampling, empirical and report services."""

from __future__ import annotations

import math
from datetime import datetime, timezone
from typing import Any, Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ricbounds.core.errors import DomainError
from ricbounds.core.settings import get_settings


Side = Literal["min", "max"]
BoundMethod = Literal["implicit", "small_rho", "small_delta", "gamma_path", "gamma_limit"]
EnumerationMode = Literal["exhaustive", "monte_carlo"]
Regime = Literal["small_rho", "small_delta", "gamma_path"]

MAX_SEED = 2**64 - 1


class GridPoint(BaseModel):
    """An admissible (delta, rho) = (n/N, k/n) pair."""

    model_config = ConfigDict(frozen=True)

    delta: float
    rho: float

    @field_validator("delta", "rho")
    @classmethod
    def _open_unit_interval(cls, v: float) -> float:
        if not (0.0 < v < 1.0) or not math.isfinite(v):
            raise ValueError("must lie in the open interval (0, 1)")
        return v

    @property
    def log_delta(self) -> float:
        return math.log(self.delta)

    @property
    def log_rho(self) -> float:
        return math.log(self.rho)


def grid_point(delta: float, rho: float) -> GridPoint:
    """Build a GridPoint, reporting inadmissible coordinates as DomainError."""
    try:
        return GridPoint(delta=delta, rho=rho)
    except ValidationError as exc:
        raise DomainError(f"inadmissible grid point (delta={delta!r}, rho={rho!r}): {exc.errors()[0]['msg']}") from exc


class ExponentValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    side: Side


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(default=1e-12, gt=0.0)
    max_iterations: int = Field(default=200, ge=1)
    bracket_growth: float = Field(default=2.0, gt=1.0)

    @classmethod
    def from_settings(cls) -> "SolverConfig":
        settings = get_settings()
        return cls(
            tolerance=settings.solver_tolerance,
            max_iterations=settings.solver_max_iterations,
            bracket_growth=settings.solver_bracket_growth,
        )


class RicPair(BaseModel):
    """Lower and upper RIC bound values plus how they were obtained.

    ``log_lower_gap`` holds log(1 - lower) when it is known more accurately than
    ``lower`` itself, which happens once the lower bound saturates at one.
    """

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    method: BoundMethod
    residual: float = 0.0
    residual_min: float = 0.0
    residual_max: float = 0.0
    log_lower_gap: Optional[float] = None
    lambda_min: Optional[float] = None
    log_lambda_min: Optional[float] = None
    lambda_max: Optional[float] = None
    regime_valid: bool = True
    notes: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def _implicit_invariants(self) -> "RicPair":
        if self.method == "implicit":
            # lower < 1 mathematically; it rounds to 1.0 once lambda_min < ~1e-16
            if not (0.0 <= self.lower <= 1.0):
                raise ValueError("implicit lower bound must lie in [0, 1]")
            if not self.upper > 0.0:
                raise ValueError("implicit upper bound must be positive")
        return self

    @property
    def lower_gap(self) -> float:
        """1 - lower, taken from the log form when available."""
        if self.log_lower_gap is not None:
            return math.exp(self.log_lower_gap)
        return 1.0 - self.lower


class RegimeConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    c: float = 6.0
    c_u: float = 1.0 / 3.0
    c_l: float = 1.0 / 3.0
    gamma: float = 300.0
    epsilon: float = 0.1

    @property
    def small_rho_valid(self) -> bool:
        return self.c > 6.0

    @property
    def small_delta_valid(self) -> bool:
        return self.c > 1.0

    @property
    def gamma_path_valid(self) -> bool:
        return self.c_u > 1.0 / 3.0 and self.c_l < 1.0 / 3.0 and self.gamma > 4.0


class ProblemSize(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    n: int
    N: int

    @model_validator(mode="after")
    def _ordered(self) -> "ProblemSize":
        if not (1 <= self.k <= self.n <= self.N):
            raise ValueError(f"need 1 <= k <= n <= N, got k={self.k}, n={self.n}, N={self.N}")
        return self


class RecoveryCondition(BaseModel):
    """A monotone pass/fail predicate over (lower, upper) RIC bounds."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    predicate: Callable[[float, float], bool]
    description: str = ""

    def __call__(self, lower: float, upper: float) -> bool:
        return bool(self.predicate(lower, upper))


def max_ric_below(threshold: float) -> RecoveryCondition:
    """Condition max(L, U) < threshold."""
    return RecoveryCondition(
        predicate=lambda lower, upper: max(lower, upper) < threshold,
        description=f"max(L, U) < {threshold:g}",
    )


class MatrixSample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: Any
    n: int
    N: int
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _shape(self) -> "MatrixSample":
        entries = self.entries
        if not isinstance(entries, np.ndarray) or entries.dtype != np.float64:
            raise ValueError("entries must be a float64 numpy array")
        if entries.shape != (self.n, self.N):
            raise ValueError(f"entries shape {entries.shape} does not match n={self.n}, N={self.N}")
        if self.seed is not None and not (0 <= self.seed <= MAX_SEED):
            raise ValueError("seed must be an unsigned 64-bit integer")
        return self


class EmpiricalEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower_hat: float
    upper_hat: float
    mode: EnumerationMode
    subsets_evaluated: int
    seed: int
    size: ProblemSize
    lower_support: Tuple[int, ...] = ()
    upper_support: Tuple[int, ...] = ()
    flagged: bool = False

    @model_validator(mode="after")
    def _bounds(self) -> "EmpiricalEstimate":
        if not self.upper_hat > -1.0:
            raise ValueError("upper_hat must exceed -1")
        if self.mode == "exhaustive" and self.subsets_evaluated != math.comb(self.size.N, self.size.k):
            raise ValueError("exhaustive estimates must evaluate every support")
        return self


class LemmaResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    lemma: str
    inequality: str
    x: float
    slack: float
    passed: bool


class LemmaReport(BaseModel):
    results: List[LemmaResult]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.results)

    def failures(self) -> List[LemmaResult]:
        return [item for item in self.results if not item.passed]


class RegimeCheck(BaseModel):
    """One perturbed-exponent sign check from a theorem's proof."""

    model_config = ConfigDict(frozen=True)

    theorem: str
    part: int
    side: Side
    delta: float
    rho: float
    constant: float
    trial: float
    exponent: float
    expected: Literal["negative", "nonnegative"]

    @property
    def passed(self) -> bool:
        if self.expected == "negative":
            return self.exponent < 0.0
        return self.exponent >= 0.0


class SweepSpec(BaseModel):
    """A log-spaced sweep; ``fixed`` is delta, rho or gamma depending on the regime."""

    model_config = ConfigDict(frozen=True)

    regime: Regime
    fixed: float
    start_exponent: int
    end_exponent: int
    points: int = Field(ge=2)
    constants: RegimeConstants = RegimeConstants()

    @model_validator(mode="after")
    def _admissible(self) -> "SweepSpec":
        if not math.isfinite(self.fixed):
            raise ValueError("fixed coordinate must be finite")
        if max(self.start_exponent, self.end_exponent) >= 0:
            raise ValueError("swept coordinate must stay below 1 (exponents < 0)")
        if self.regime == "gamma_path":
            if self.fixed <= 0.0:
                raise ValueError("gamma must be positive")
        elif not (0.0 < self.fixed < 1.0):
            raise ValueError("fixed coordinate must lie in (0, 1)")
        return self

    def grid(self) -> List[float]:
        lo, hi = sorted((self.start_exponent, self.end_exponent))
        return [float(v) for v in np.logspace(lo, hi, self.points)]


class ReportRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta: float
    rho: float
    implicit_lower: float
    implicit_upper: float
    formula_lower: float
    formula_upper: float
    reldiff_lower: float
    reldiff_upper: float
    error: Optional[str] = None


class GammaRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float
    rho: float
    path_lower: float
    path_upper: float
    limit_lower: float
    limit_upper: float
    reldiff_lower: float
    reldiff_upper: float


class ValidationLine(BaseModel):
    model_config = ConfigDict(frozen=True)

    side: Literal["lower", "upper"]
    empirical: float
    bound: float
    slack: float
    status: str


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    size: ProblemSize
    mode: EnumerationMode
    subsets_evaluated: int
    method: BoundMethod
    lines: Tuple[ValidationLine, ValidationLine]

    @property
    def consistent(self) -> bool:
        return all(line.status == "consistent" for line in self.lines)

    @property
    def exceeds_lower(self) -> bool:
        return self.lines[0].status != "consistent"

    @property
    def exceeds_upper(self) -> bool:
        return self.lines[1].status != "consistent"


class RunLogEntry(BaseModel):
    """One JSONL line of the run log. Unknown keys survive a prune round trip."""

    model_config = ConfigDict(extra="allow")

    timestamp: Optional[str] = None
    category: Optional[str] = None
    action: Optional[str] = None
    status: Optional[str] = None
    message: Optional[str] = None

    def logged_at(self) -> Optional[datetime]:
        if not self.timestamp:
            return None
        try:
            parsed = datetime.fromisoformat(self.timestamp.rstrip("Z"))
        except ValueError:
            return None
        return parsed if parsed.tzinfo else parsed.replace(tzinfo=timezone.utc)

    def to_line(self) -> str:
        return self.model_dump_json(exclude_unset=True) + "\n"
