#!/usr/bin/env python3
"""
Write the data behind the bound-comparison figures as CSV files.

Outputs (default directory: output/figures):
    fig1.csv  small-rho sweep, delta = 0.25, c = 6
    fig2.csv  small-delta sweep, rho = 0.5, c = 1
    fig3.csv  small-delta sweep, rho = 0.1, c = 1
    fig4.csv  gamma-path sweep, gamma = 300, c_u = c_l = 1/3
    fig5.csv  gamma-path vs gamma-limit over gamma in (1, 300] at delta = 1e-80

Usage:
    python -m scripts.reproduce_figures
    python -m scripts.reproduce_figures --out data/figures --threads 4 --only 1 5
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from dotenv import load_dotenv

project_root = Path(__file__).resolve().parents[1]
sys.path.append(str(project_root))

from ricbounds.services.logging_setup import configure_logging  # noqa: E402
from ricbounds.services.reports import (  # noqa: E402
    compare_sweep,
    figure_spec,
    frame_to_csv,
    gamma_rows_to_frame,
    gamma_sweep,
    write_rows,
)

GAMMA_SWEEP_DELTA = 1e-80
GAMMA_SWEEP_POINTS = 300


def write_figure(number: int, out_dir: Path, threads: int | None, progress: bool) -> Path:
    """Compute one figure's table and write it as fig<number>.csv."""
    path = out_dir / f"fig{number}.csv"
    if number == 5:
        gammas = [float(g) for g in np.linspace(1.0, 300.0, GAMMA_SWEEP_POINTS)]
        frame = gamma_rows_to_frame(gamma_sweep(GAMMA_SWEEP_DELTA, gammas))
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(frame_to_csv(frame), encoding="utf-8")
        return path
    rows = compare_sweep(figure_spec(number), workers=threads, progress=progress)
    return write_rows(rows, path)


def main() -> None:
    parser = argparse.ArgumentParser(description="Write figure data sets as CSV.")
    parser.add_argument("--out", type=Path, default=project_root / "output" / "figures", help="Output directory.")
    parser.add_argument("--only", nargs="*", type=int, default=[1, 2, 3, 4, 5], help="Figure numbers to write.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads, at most RIC_BOUNDS_THREADS (default: the cap).")
    parser.add_argument("--progress", action="store_true", help="Show progress bars.")
    args = parser.parse_args()

    configure_logging()
    for number in args.only:
        path = write_figure(number, args.out, args.threads, args.progress)
        print(f"Wrote {path}")


if __name__ == "__main__":
    load_dotenv(dotenv_path=project_root / ".env")
    main()
