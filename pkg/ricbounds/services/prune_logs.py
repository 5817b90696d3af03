"""Retention for the JSONL run log and for stale sweep artefacts."""

from __future__ import annotations

import logging
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from ricbounds.core.models import RunLogEntry
from ricbounds.core.settings import get_settings

logger = logging.getLogger(__name__)

RUN_LOG_NAME = "runs.log"
ARCHIVE_NAME = "archive"
ARTEFACT_SUFFIXES = frozenset({".csv", ".json", ".log", ".ricm"})


def run_log_path() -> Path:
    return get_settings().data_dir / RUN_LOG_NAME


def archive_dir() -> Path:
    return get_settings().data_dir / ARCHIVE_NAME


def load_entries(path: Optional[Path] = None) -> List[RunLogEntry]:
    """Parse a run log, skipping blank and malformed lines. A missing file is empty."""
    path = path or run_log_path()
    if not path.exists():
        return []
    entries: List[RunLogEntry] = []
    with path.open("r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entries.append(RunLogEntry.model_validate_json(line))
            except ValidationError:
                logger.debug("run log %s: skipping malformed line %d", path, number)
    return entries


def _split_by_retention(
    entries: Sequence[RunLogEntry], max_days: int, max_entries: int, now: datetime
) -> Tuple[List[RunLogEntry], List[RunLogEntry]]:
    # undated entries count as expired once an age limit is set
    kept, expired = list(entries), []
    if max_days > 0:
        cutoff = now - timedelta(days=max_days)
        kept, expired = [], []
        for entry in entries:
            moment = entry.logged_at()
            (kept if moment is not None and moment >= cutoff else expired).append(entry)
    if max_entries > 0 and len(kept) > max_entries:
        overflow = len(kept) - max_entries
        expired.extend(kept[:overflow])
        kept = kept[overflow:]
    return kept, expired


def prune_logs(
    max_days: Optional[int] = None,
    max_entries: Optional[int] = None,
    now: Optional[datetime] = None,
) -> Dict[str, int]:
    """
    Trim the run log by age and count.

    Entries older than ``max_days`` and the oldest entries beyond ``max_entries``
    are appended to ``archive/<YYYYMMDD>_runs.jsonl``; the rest are rewritten in
    place. Limits default to the settings; zero disables a limit.
    """
    settings = get_settings()
    max_days = settings.run_log_max_days if max_days is None else max_days
    max_entries = settings.run_log_max_entries if max_entries is None else max_entries
    now = now or datetime.now(timezone.utc)

    entries = load_entries()
    if not entries:
        return {"kept": 0, "archived": 0}

    kept, expired = _split_by_retention(entries, max_days, max_entries, now)
    _write_lines(run_log_path(), kept, mode="w")
    archive_entries(expired, now)
    return {"kept": len(kept), "archived": len(expired)}


def archive_entries(entries: Sequence[RunLogEntry], now: Optional[datetime] = None) -> Optional[Path]:
    if not entries:
        return None
    now = now or datetime.now(timezone.utc)
    target = archive_dir() / f"{now:%Y%m%d}_runs.jsonl"
    _write_lines(target, entries, mode="a")
    return target


def _write_lines(path: Path, entries: Iterable[RunLogEntry], mode: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open(mode, encoding="utf-8") as f:
        f.writelines(entry.to_line() for entry in entries)


def stale_artefacts(
    roots: Iterable[Path],
    days: int,
    suffixes: Iterable[str] = ARTEFACT_SUFFIXES,
    now: Optional[datetime] = None,
) -> Iterator[Path]:
    """
    Yield sweep CSVs, RICM dumps and log files under ``roots`` last modified
    more than ``days`` ago. The live run log is never yielded.
    """
    now = now or datetime.now(timezone.utc)
    cutoff = (now - timedelta(days=days)).timestamp()
    wanted = {s.lower() if s.startswith(".") else f".{s.lower()}" for s in suffixes}
    live = run_log_path().resolve()
    for root in roots:
        if not root.exists():
            continue
        for path in [root] if root.is_file() else sorted(root.rglob("*")):
            if not path.is_file() or path.suffix.lower() not in wanted or path.resolve() == live:
                continue
            try:
                if path.stat().st_mtime <= cutoff:
                    yield path
            except OSError:
                continue
