"""JSONL run log: one line per CLI invocation and per pooled job."""

from __future__ import annotations

import logging
from datetime import datetime, timezone
from typing import Any, Dict, List

from ricbounds.core.models import RunLogEntry
from ricbounds.core.settings import get_settings
from ricbounds.services.prune_logs import load_entries, prune_logs, run_log_path

logger = logging.getLogger(__name__)


def log_job(category: str, action: str, status: str, message: str) -> None:
    """
    Append ``{timestamp, category, action, status, message}`` to the run log,
    then apply retention. No-op when RIC_BOUNDS_RUN_LOG_ENABLED is false.
    """
    if not get_settings().run_log_enabled:
        return
    entry = RunLogEntry(
        timestamp=datetime.now(timezone.utc).replace(tzinfo=None).isoformat(timespec="seconds") + "Z",
        category=category,
        action=action,
        status=status,
        message=message,
    )
    path = run_log_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as f:
        f.write(entry.to_line())

    try:
        prune_logs()
    except OSError as exc:
        # a failed prune never loses the entry just written
        logger.warning("run log pruning failed: %s", exc)


def read_logs() -> List[Dict[str, Any]]:
    return [entry.model_dump(exclude_unset=True) for entry in load_entries()]
