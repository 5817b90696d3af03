"""Command-line entry point: ``python -m ricbounds <subcommand>``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from ricbounds.core.errors import DomainError, InfeasibleError, SolverError
from ricbounds.core.models import RegimeConstants, SolverConfig, SweepSpec, grid_point, max_ric_below
from ricbounds.core.settings import get_settings
from ricbounds.services.asymptotic_bounds import (
    bounds_gamma_path,
    bounds_small_delta,
    bounds_small_rho,
    gamma_limit_bounds,
    rho_gamma,
    wishart_edges,
)
from ricbounds.services.empirical_ric import empirical_ric, format_validation_report, validation_report
from ricbounds.services.gaussian_matrix import read_matrix, sample_gaussian, write_matrix
from ricbounds.services.implicit_bounds import ric_bounds
from ricbounds.services.lemma_inequalities import summarize, verify_lemma_inequalities
from ricbounds.services.logger import log_job
from ricbounds.services.logging_setup import configure_logging
from ricbounds.services.regime_checks import failures, run_regime_suite
from ricbounds.services.reports import compare_sweep, load_sweep_spec, render_rows, write_rows
from ricbounds.services.sampling_theorems import min_gamma, omp_min_measurements, problem_size, to_grid_point


logger = logging.getLogger(__name__)

_ROOT = Path(__file__).resolve().parents[1]
_ENV = _ROOT / ".env"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_SOLVER = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse with the sysexits usage code instead of 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    base = SolverConfig.from_settings()
    updates = {}
    if getattr(args, "tol", None) is not None:
        updates["tolerance"] = args.tol
    if getattr(args, "max_iter", None) is not None:
        updates["max_iterations"] = args.max_iter
    return SolverConfig(**{**base.model_dump(), **updates})


def cmd_bounds(args: argparse.Namespace) -> int:
    pair = ric_bounds(grid_point(args.delta, args.rho), _solver_config(args))
    print(f"lower={_fmt(pair.lower)}")
    print(f"upper={_fmt(pair.upper)}")
    print(f"log_lower_gap={_fmt(pair.log_lower_gap)}")
    print(f"residual={pair.residual:.3e}")
    return EXIT_OK


def cmd_asymptotic(args: argparse.Namespace) -> int:
    regime = args.regime
    if regime == "small_rho":
        pair = bounds_small_rho(grid_point(args.delta, args.rho), args.c if args.c is not None else 6.0)
        rho = args.rho
    elif regime == "small_delta":
        pair = bounds_small_delta(grid_point(args.delta, args.rho), args.c if args.c is not None else 1.0)
        rho = args.rho
    elif regime == "gamma_path":
        pair = bounds_gamma_path(args.delta, args.gamma, args.cu, args.cl, literal_lower=args.literal_lower)
        rho = rho_gamma(args.delta, args.gamma)
    else:
        pair = gamma_limit_bounds(args.gamma, args.cu, args.cl)
        rho = None
    print(f"lower={_fmt(pair.lower)}")
    print(f"upper={_fmt(pair.upper)}")
    if pair.log_lower_gap is not None:
        print(f"log_lower_gap={_fmt(pair.log_lower_gap)}")
    print(f"regime_valid={pair.regime_valid}")
    for note in pair.notes:
        print(f"note={note}")
    if rho is not None and rho <= 1.0:
        wishart_lower, wishart_upper = wishart_edges(rho)
        print(f"wishart_lower={_fmt(wishart_lower)}")
        print(f"wishart_upper={_fmt(wishart_upper)}")
    return EXIT_OK


def _sweep_from_args(args: argparse.Namespace) -> SweepSpec:
    if args.spec is not None:
        spec, tolerance = load_sweep_spec(args.spec)
        if tolerance is not None and args.tol is None:
            args.tol = tolerance
        return spec
    missing = [flag for flag in ("regime", "fixed", "start", "end") if getattr(args, flag) is None]
    if missing:
        raise DomainError(f"compare needs --spec or --{' --'.join(missing)}")
    constants = RegimeConstants(
        c=args.c if args.c is not None else (6.0 if args.regime == "small_rho" else 1.0),
        c_u=args.cu,
        c_l=args.cl,
        gamma=args.fixed if args.regime == "gamma_path" else 300.0,
    )
    try:
        return SweepSpec(
            regime=args.regime,
            fixed=args.fixed,
            start_exponent=args.start,
            end_exponent=args.end,
            points=args.points,
            constants=constants,
        )
    except ValidationError as exc:
        raise DomainError(f"invalid sweep: {exc.errors()[0]['msg']}") from exc


def cmd_compare(args: argparse.Namespace) -> int:
    spec = _sweep_from_args(args)
    rows = compare_sweep(spec, _solver_config(args), workers=args.threads, progress=args.progress)
    if args.out is None:
        sys.stdout.write(render_rows(rows, args.format))
    else:
        path = write_rows(rows, args.out, args.format)
        logger.info("wrote %d rows to %s", len(rows), path)
    return EXIT_OK


def cmd_sampling_omp(args: argparse.Namespace) -> int:
    print(omp_min_measurements(args.k, args.N))
    return EXIT_OK


def cmd_sampling_min_gamma(args: argparse.Namespace) -> int:
    gamma = min_gamma(
        max_ric_below(args.threshold),
        c_u=args.cu,
        c_l=args.cl,
        resolution=args.resolution,
        path_delta=args.path_delta,
    )
    print(_fmt(gamma))
    return EXIT_OK


def cmd_empirical(args: argparse.Namespace) -> int:
    if args.load is not None:
        matrix = read_matrix(args.load)
    else:
        matrix = sample_gaussian(args.n, args.N, args.seed)
    if args.dump is not None:
        write_matrix(matrix, args.dump)
    mc_seed = args.mc_seed if args.mc_seed is not None else args.seed
    estimate = empirical_ric(
        matrix, args.k, mode=args.mode, budget=args.budget, seed=mc_seed, workers=args.threads, progress=args.progress
    )
    size = problem_size(args.k, matrix.n, matrix.N)
    if size.n == size.N or size.k == size.n:
        print(f"lower_hat={_fmt(estimate.lower_hat)}")
        print(f"upper_hat={_fmt(estimate.upper_hat)}")
        logger.warning("delta or rho equals one; no implicit bound to compare against")
        return EXIT_OK
    bounds = ric_bounds(to_grid_point(size))
    print(format_validation_report(validation_report(estimate, bounds)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    lemma_report = verify_lemma_inequalities(count=args.samples)
    for lemma, stats in sorted(summarize(lemma_report).items()):
        print(f"lemma {lemma:<16} checks={int(stats['checks']):>5} failures={int(stats['failures'])} "
              f"min_slack={stats['min_slack']:.3e}")
    checks = run_regime_suite()
    failed = failures(checks)
    for check in checks:
        mark = "ok" if check.passed else "FAIL"
        print(f"regime {check.theorem:<11} part={check.part} side={check.side} delta={check.delta:.0e} "
              f"exponent={check.exponent:+.6e} {mark}")
    if lemma_report.passed and not failed:
        print("verify: all checks passed")
        return EXIT_OK
    print(f"verify: {len(lemma_report.failures())} lemma and {len(failed)} regime checks failed")
    return EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ricbounds", description="RIC bounds for Gaussian matrices.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="Implicit lower/upper RIC bounds at (delta, rho).")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help="Residual tolerance on Psi.")
    p.add_argument("--max-iter", type=int, default=None)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("asymptotic", help="Closed-form bounds for one regime.")
    p.add_argument("--regime", required=True, choices=["small_rho", "small_delta", "gamma_path", "gamma_limit"])
    p.add_argument("--delta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--cu", type=float, default=1.0 / 3.0)
    p.add_argument("--cl", type=float, default=1.0 / 3.0)
    p.add_argument("--gamma", type=float, default=300.0)
    p.add_argument("--literal-lower", action="store_true", help="Use the rho (not 2 rho) lower correction.")
    p.set_defaults(handler=cmd_asymptotic)

    p = sub.add_parser("compare", help="Implicit vs closed-form sweep as CSV or JSON.")
    p.add_argument("--spec", type=Path, default=None, help="key=value sweep file.")
    p.add_argument("--regime", choices=["small_rho", "small_delta", "gamma_path"])
    p.add_argument("--fixed", type=float, help="delta, rho or gamma, by regime.")
    p.add_argument("--start", type=int, help="First log10 exponent of the swept coordinate.")
    p.add_argument("--end", type=int, help="Last log10 exponent of the swept coordinate.")
    p.add_argument("--points", type=int, default=30)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--cu", type=float, default=1.0 / 3.0)
    p.add_argument("--cl", type=float, default=1.0 / 3.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--threads", type=int, default=None, help="Worker threads, at most RIC_BOUNDS_THREADS.")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("sampling", help="Sampling-theorem solvers.")
    sampling = p.add_subparsers(dest="sampling_command", required=True)
    q = sampling.add_parser("omp", help="Minimal measurements for OMP recovery.")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--N", type=int, required=True)
    q.set_defaults(handler=cmd_sampling_omp)
    q = sampling.add_parser("min-gamma", help="Minimal gamma for max(L, U) < threshold.")
    q.add_argument("--threshold", type=float, required=True)
    q.add_argument("--cu", type=float, default=1.0 / 3.0)
    q.add_argument("--cl", type=float, default=1.0 / 3.0)
    q.add_argument("--resolution", type=float, default=1e-6)
    q.add_argument("--path-delta", type=float, default=None, help="Use the gamma-path bounds at this delta.")
    q.set_defaults(handler=cmd_sampling_min_gamma)

    p = sub.add_parser("empirical", help="Empirical RICs of a sampled matrix against the implicit bounds.")
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-seed", type=int, default=None, help="Support-sampling seed (defaults to --seed).")
    p.add_argument("--mode", choices=["exhaustive", "monte_carlo"], default="exhaustive")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--load", type=Path, default=None, help="Read the matrix from a RICM file.")
    p.add_argument("--dump", type=Path, default=None, help="Write the matrix to a RICM file.")
    p.add_argument("--threads", type=int, default=None, help="Worker threads, at most RIC_BOUNDS_THREADS.")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(handler=cmd_empirical)

    p = sub.add_parser("verify", help="Lemma inequalities and regime sign checks.")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(handler=cmd_verify)
    return parser


def _check_required(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    needs: Dict[str, List[str]] = {
        "small_rho": ["delta", "rho"],
        "small_delta": ["delta", "rho"],
        "gamma_path": ["delta"],
    }
    if args.command == "asymptotic":
        missing = [name for name in needs.get(args.regime, []) if getattr(args, name) is None]
        if missing:
            parser.error(f"--regime {args.regime} needs --{' --'.join(missing)}")
    if args.command == "empirical" and args.load is None and (args.n is None or args.N is None):
        parser.error("empirical needs --n and --N unless --load is given")


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv(dotenv_path=_ENV if _ENV.exists() else None)
    get_settings.cache_clear()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_required(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(verbose=args.verbose)
    handler: Callable[[argparse.Namespace], int] = args.handler
    action = args.command if args.command != "sampling" else f"sampling_{args.sampling_command}"
    try:
        code = handler(args)
    except (DomainError, ValidationError) as exc:
        logger.error("%s", exc)
        log_job("cli", action, "error", str(exc))
        return EXIT_DOMAIN
    except (SolverError, InfeasibleError) as exc:
        logger.error("%s", exc)
        log_job("cli", action, "error", str(exc))
        return EXIT_SOLVER
    log_job("cli", action, "success" if code == EXIT_OK else "error", f"exit={code}")
    return code


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
