"""Sweeps comparing implicit and closed-form bounds, and their CSV/JSON output."""

from __future__ import annotations

import json
import logging
import math
import warnings
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import pandas as pd
from pydantic import ValidationError

from ricbounds.core.errors import DomainError, RegimeWarning, RicBoundsError
from ricbounds.core.models import GammaRow, RegimeConstants, ReportRow, RicPair, SolverConfig, SweepSpec, grid_point
from ricbounds.services.asymptotic_bounds import (
    bounds_gamma_path,
    bounds_small_delta,
    bounds_small_rho,
    gamma_limit_bounds,
    rho_gamma,
)
from ricbounds.services.implicit_bounds import ric_bounds
from ricbounds.services.job_manager import run_jobs


logger = logging.getLogger(__name__)

OutputFormat = Literal["csv", "json"]

REPORT_COLUMNS = [
    "delta",
    "rho",
    "implicit_lower",
    "implicit_upper",
    "formula_lower",
    "formula_upper",
    "reldiff_lower",
    "reldiff_upper",
]
GAMMA_COLUMNS = [
    "gamma",
    "rho",
    "path_lower",
    "path_upper",
    "limit_lower",
    "limit_upper",
    "reldiff_lower",
    "reldiff_upper",
]
FLOAT_FORMAT = "%.17g"

FIGURE_SPECS: Dict[int, Dict[str, Any]] = {
    1: {"regime": "small_rho", "fixed": 0.25, "start_exponent": -10, "end_exponent": -1, "points": 30,
        "constants": {"c": 6.0}},
    2: {"regime": "small_delta", "fixed": 0.5, "start_exponent": -50, "end_exponent": -1, "points": 50,
        "constants": {"c": 1.0}},
    3: {"regime": "small_delta", "fixed": 0.1, "start_exponent": -50, "end_exponent": -1, "points": 50,
        "constants": {"c": 1.0}},
    4: {"regime": "gamma_path", "fixed": 300.0, "start_exponent": -80, "end_exponent": -1, "points": 80,
        "constants": {"c_u": 1.0 / 3.0, "c_l": 1.0 / 3.0, "gamma": 300.0}},
}

_SPEC_KEYS = {"regime", "fixed", "start", "end", "points", "c", "c_u", "c_l", "gamma", "epsilon", "tolerance"}


def figure_spec(number: int) -> SweepSpec:
    """Sweep behind one of the four bound-comparison figures."""
    if number not in FIGURE_SPECS:
        raise DomainError(f"no sweep preset for figure {number!r}; choose from {sorted(FIGURE_SPECS)}")
    return SweepSpec.model_validate(FIGURE_SPECS[number])


def parse_sweep_spec(text: str) -> tuple[SweepSpec, Optional[float]]:
    """Parse a flat ``key = value`` sweep description; returns the spec and an optional solver tolerance.

    Blank lines and ``#`` comments are ignored. For the gamma-path regime
    ``fixed`` defaults to ``gamma``.
    """
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {number}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SPEC_KEYS:
            raise DomainError(f"line {number}: unknown key {key!r}")
        values[key] = value

    try:
        constants = RegimeConstants(**{key: float(values[key]) for key in ("c", "c_u", "c_l", "gamma", "epsilon") if key in values})
        regime = values.get("regime", "")
        fixed = values.get("fixed")
        if fixed is None and regime == "gamma_path":
            fixed = str(constants.gamma)
        spec = SweepSpec(
            regime=regime,
            fixed=float(fixed) if fixed is not None else math.nan,
            start_exponent=int(values["start"]),
            end_exponent=int(values["end"]),
            points=int(values["points"]),
            constants=constants,
        )
    except KeyError as exc:
        raise DomainError(f"sweep spec is missing {exc.args[0]!r}") from exc
    except (ValueError, ValidationError) as exc:
        raise DomainError(f"invalid sweep spec: {exc}") from exc
    if spec.regime == "gamma_path" and "gamma" not in values:
        spec = spec.model_copy(update={"constants": constants.model_copy(update={"gamma": spec.fixed})})
    tolerance = float(values["tolerance"]) if "tolerance" in values else None
    return spec, tolerance


def load_sweep_spec(path: Union[str, Path]) -> tuple[SweepSpec, Optional[float]]:
    return parse_sweep_spec(Path(path).read_text(encoding="utf-8"))


def _formula(spec: SweepSpec, delta: float, warn: bool = True) -> RicPair:
    constants = spec.constants
    if spec.regime == "small_rho":
        return bounds_small_rho(grid_point(spec.fixed, delta), constants.c, warn=warn)
    if spec.regime == "small_delta":
        return bounds_small_delta(grid_point(delta, spec.fixed), constants.c, warn=warn)
    return bounds_gamma_path(delta, spec.fixed, constants.c_u, constants.c_l, warn=warn)


def _coordinates(spec: SweepSpec, value: float) -> tuple[float, float]:
    if spec.regime == "small_rho":
        return spec.fixed, value
    if spec.regime == "small_delta":
        return value, spec.fixed
    return value, rho_gamma(value, spec.fixed)


def _relative(diff: float, reference: float) -> float:
    return abs(diff) / abs(reference)


def compare_point(
    spec: SweepSpec,
    value: float,
    cfg: Optional[SolverConfig] = None,
    warn: bool = True,
) -> ReportRow:
    """One sweep row; failures are recorded on the row instead of raised."""
    delta, rho = _coordinates(spec, value)
    try:
        implicit = ric_bounds(grid_point(delta, rho), cfg)
        formula = _formula(spec, value, warn)
    except RicBoundsError as exc:
        logger.warning("sweep point (delta=%r, rho=%r) failed: %s", delta, rho, exc)
        nan = math.nan
        return ReportRow(
            delta=delta, rho=rho, implicit_lower=nan, implicit_upper=nan, formula_lower=nan,
            formula_upper=nan, reldiff_lower=nan, reldiff_upper=nan, error=f"{type(exc).__name__}: {exc}",
        )
    # differences through the gaps keep precision once both lower bounds sit near one
    return ReportRow(
        delta=delta,
        rho=rho,
        implicit_lower=implicit.lower,
        implicit_upper=implicit.upper,
        formula_lower=formula.lower,
        formula_upper=formula.upper,
        reldiff_lower=_relative(formula.lower_gap - implicit.lower_gap, implicit.lower),
        reldiff_upper=_relative(implicit.upper - formula.upper, implicit.upper),
    )


def compare_sweep(
    spec: SweepSpec,
    cfg: Optional[SolverConfig] = None,
    workers: Optional[int] = None,
    progress: bool = False,
) -> List[ReportRow]:
    """Implicit vs closed-form bounds over the spec's grid, ordered by the swept coordinate."""
    cfg = cfg if cfg is not None else SolverConfig.from_settings()
    grid = spec.grid()
    valid = {
        "small_rho": spec.constants.small_rho_valid,
        "small_delta": spec.constants.small_delta_valid,
        "gamma_path": spec.constants.gamma_path_valid,
    }[spec.regime]
    # one warning per sweep; the pooled points stay silent
    if not valid:
        warnings.warn(f"{spec.regime} sweep uses constants outside the proven regime", RegimeWarning, stacklevel=2)
    rows = run_jobs(f"compare_{spec.regime}", lambda value: compare_point(spec, value, cfg, warn=False), grid,
                    workers=workers, progress=progress)
    failed = sum(row.error is not None for row in rows)
    if failed:
        logger.warning("%d of %d sweep rows failed", failed, len(rows))
    return rows


def gamma_sweep(
    delta: float,
    gammas: Sequence[float],
    c_u: float = 1.0 / 3.0,
    c_l: float = 1.0 / 3.0,
) -> List[GammaRow]:
    """Gamma-path bounds at a fixed small delta against their gamma limits."""
    rows: List[GammaRow] = []
    for gamma in gammas:
        path = bounds_gamma_path(delta, gamma, c_u, c_l, warn=False)
        limit = gamma_limit_bounds(gamma, c_u, c_l)
        rows.append(
            GammaRow(
                gamma=gamma,
                rho=rho_gamma(delta, gamma),
                path_lower=path.lower,
                path_upper=path.upper,
                limit_lower=limit.lower,
                limit_upper=limit.upper,
                reldiff_lower=_relative(path.lower - limit.lower, limit.lower),
                reldiff_upper=_relative(path.upper - limit.upper, limit.upper),
            )
        )
    return rows


def rows_to_frame(rows: Sequence[ReportRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump(exclude={"error"}) for row in rows], columns=REPORT_COLUMNS)


def gamma_rows_to_frame(rows: Sequence[GammaRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=GAMMA_COLUMNS)


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


def rows_to_csv(rows: Sequence[ReportRow]) -> str:
    return frame_to_csv(rows_to_frame(rows))


def rows_to_json(rows: Sequence[ReportRow]) -> str:
    """JSON array of row objects; non-finite values become null."""
    records = []
    for row in rows:
        record = row.model_dump()
        for key in REPORT_COLUMNS:
            if not math.isfinite(record[key]):
                record[key] = None
        records.append(record)
    return json.dumps(records, indent=2) + "\n"


def render_rows(rows: Sequence[ReportRow], fmt: OutputFormat = "csv") -> str:
    if fmt == "csv":
        return rows_to_csv(rows)
    if fmt == "json":
        return rows_to_json(rows)
    raise DomainError(f"unknown output format {fmt!r}")


def write_rows(rows: Sequence[ReportRow], path: Union[str, Path], fmt: OutputFormat = "csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(render_rows(rows, fmt))
    return path


def read_rows_csv(path: Union[str, Path]) -> List[ReportRow]:
    frame = pd.read_csv(path, float_precision="round_trip")
    if list(frame.columns) != REPORT_COLUMNS:
        raise DomainError(f"{path} does not carry the report header")
    return [ReportRow(**{key: float(value) for key, value in record.items()}) for record in frame.to_dict("records")]
