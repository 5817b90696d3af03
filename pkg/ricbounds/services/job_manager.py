from __future__ import annotations

import logging
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from tqdm import tqdm

from ricbounds.core.settings import get_settings
from ricbounds.services.logger import log_job

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def _log_start(job_id: str, job_type: str, items: int, workers: int) -> None:
    log_job("jobs", "start", "success", f"operation={job_type} job_id={job_id} items={items} workers={workers}")


def _log_result(job_id: str, job_type: str, status: str, duration_ms: int, message: str = "") -> None:
    log_job("jobs", "complete", status, f"operation={job_type} job_id={job_id} duration_ms={duration_ms} message={message}")


def resolve_workers(requested: Optional[int], items: int) -> int:
    """Worker count: the request capped at RIC_BOUNDS_THREADS and at the number of items."""
    cap = max(1, get_settings().threads)
    workers = cap if requested is None else min(requested, cap)
    return max(1, min(workers, items)) if items else 1


def run_jobs(
    job_type: str,
    func: Callable[[T], R],
    items: Sequence[T],
    workers: Optional[int] = None,
    progress: bool = False,
) -> List[R]:
    """
    Apply ``func`` to every item on a thread pool.

    Results come back in input order, so output never depends on the worker
    count. Start and completion are written to the run log with duration_ms;
    the first exception is re-raised after logging.
    """
    job_id = str(uuid.uuid4())
    workers = resolve_workers(workers, len(items))
    start = time.perf_counter()
    _log_start(job_id, job_type, len(items), workers)
    logger.debug("job %s (%s): %d items on %d workers", job_id, job_type, len(items), workers)

    try:
        if workers == 1:
            iterator = tqdm(items, desc=job_type, disable=not progress)
            results = [func(item) for item in iterator]
        else:
            with ThreadPoolExecutor(max_workers=workers, thread_name_prefix=job_type) as pool:
                mapped = pool.map(func, items)
                results = list(tqdm(mapped, total=len(items), desc=job_type, disable=not progress))
    except Exception as exc:  # noqa: BLE001
        duration_ms = int((time.perf_counter() - start) * 1000)
        _log_result(job_id, job_type, "error", duration_ms, message=str(exc))
        raise

    duration_ms = int((time.perf_counter() - start) * 1000)
    _log_result(job_id, job_type, "success", duration_ms)
    return results
