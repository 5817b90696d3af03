import logging

import pytest

from ricbounds.core.models import SolverConfig, grid_point
from ricbounds.core.settings import get_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("RIC_BOUNDS_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.setenv("RIC_BOUNDS_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("RIC_BOUNDS_RUN_LOG_ENABLED", "false")
    monkeypatch.setenv("RIC_BOUNDS_THREADS", "4")
    get_settings.cache_clear()
    root = logging.getLogger()
    handlers = list(root.handlers)
    yield get_settings()
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    logging.captureWarnings(False)
    get_settings.cache_clear()


@pytest.fixture
def run_log_enabled(monkeypatch):
    monkeypatch.setenv("RIC_BOUNDS_RUN_LOG_ENABLED", "true")
    get_settings.cache_clear()
    return get_settings()


@pytest.fixture
def solver_config():
    return SolverConfig()


@pytest.fixture
def reference_point():
    return grid_point(0.25, 0.1)
