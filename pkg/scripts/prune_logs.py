#!/usr/bin/env python3
"""
Remove stale sweep CSVs, RICM matrix dumps and log files, then apply run-log
retention.

    python -m scripts.prune_logs
    python -m scripts.prune_logs --days 14 --dry-run
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
sys.path.append(str(PROJECT_ROOT))

from ricbounds.core.settings import get_settings  # noqa: E402
from ricbounds.services.prune_logs import ARTEFACT_SUFFIXES, prune_logs, stale_artefacts  # noqa: E402


def main() -> None:
    settings = get_settings()
    parser = argparse.ArgumentParser(description="Delete sweep artefacts older than the retention window.")
    parser.add_argument("--days", type=int, default=30, help="Retention window in days (default: 30).")
    parser.add_argument(
        "--paths",
        nargs="*",
        type=Path,
        default=[settings.log_dir, PROJECT_ROOT / "output", settings.data_dir],
        help="Directories or files to scan (default: logs/, output/ and the data directory).",
    )
    parser.add_argument("--ext", nargs="*", default=sorted(ARTEFACT_SUFFIXES), help="Suffixes to target.")
    parser.add_argument("--dry-run", action="store_true", help="List what would be deleted.")
    args = parser.parse_args()

    removed = 0
    for path in stale_artefacts(args.paths, args.days, args.ext):
        if args.dry_run:
            print(f"[DRY-RUN] {path}")
            removed += 1
            continue
        try:
            path.unlink()
        except OSError as exc:
            print(f"Failed to delete {path}: {exc}")
            continue
        print(f"Deleted {path}")
        removed += 1

    verb = "would be deleted" if args.dry_run else "deleted"
    print(f"\n{removed} artefact(s) {verb}.")
    if not args.dry_run:
        stats = prune_logs()
        print(f"Run log: kept {stats['kept']} entries, archived {stats['archived']}.")


if __name__ == "__main__":
    main()
