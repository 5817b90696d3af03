"""Process-wide logging for CLI runs."""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional

from ricbounds.core.settings import get_settings


LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
LOG_FILENAME = "ricbounds.log"


def configure_logging(verbose: bool = False, log_dir: Optional[Path] = None) -> Path:
    """Attach a file handler (reset per run) and a stderr handler to the root logger.

    Warnings, including regime warnings, are routed through logging so they
    reach stderr instead of stdout.
    """
    log_dir = Path(log_dir) if log_dir is not None else get_settings().log_dir
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / LOG_FILENAME
    log_file.write_text("", encoding="utf-8")

    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    formatter = logging.Formatter(LOG_FORMAT)

    has_file = any(
        isinstance(handler, logging.FileHandler)
        and getattr(handler, "baseFilename", "") == str(log_file.resolve())
        for handler in root.handlers
    )
    if not has_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    has_stream = any(getattr(handler, "_ricbounds_stderr", False) for handler in root.handlers)
    if not has_stream:
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(formatter)
        stream_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
        stream_handler._ricbounds_stderr = True  # type: ignore[attr-defined]
        root.addHandler(stream_handler)

    logging.captureWarnings(True)
    return log_file
