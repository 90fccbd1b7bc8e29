"""
Logging configuration for the dispersion solvers.
Structured logging with console (stderr) and rotating file output.
Every record carries the id of the CLI run that produced it via contextvars.
"""

import logging
import os
import sys
import uuid
from contextvars import ContextVar
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path

from .config import get_settings


# ============== Run ID Context ==============

# One id per CLI invocation; library calls outside a run log "-"
run_id_ctx: ContextVar[str] = ContextVar("run_id", default="-")


def generate_run_id() -> str:
    """Generate a short unique run ID."""
    return uuid.uuid4().hex[:12]


def get_run_id() -> str:
    """Get the current run ID from context."""
    return run_id_ctx.get()


def set_run_id(rid: str) -> None:
    """Set the run ID in context."""
    run_id_ctx.set(rid)


# ============== Custom Log Filter ==============

class RunIdFilter(logging.Filter):
    """
    Inject the current run_id from contextvars into every log record.
    This allows %(run_id)s to be used in log format strings.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = run_id_ctx.get()
        return True


# ============== Log Setup ==============

LOG_FORMAT = (
    "%(asctime)s.%(msecs)03d | %(levelname)-8s | %(name)-28s "
    "| rid=%(run_id)s | %(funcName)s:%(lineno)d | %(message)s"
)
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def ensure_log_file_exists(log_file: Path) -> bool:
    """True when `log_file` exists (creating it and its directory) and is writable."""
    try:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        log_file.touch(exist_ok=True)
    except OSError as e:
        print(f"[Logging] Warning: Cannot create log file {log_file}: {e}", file=sys.stderr)
        return False

    if not os.access(log_file, os.W_OK):
        print(f"[Logging] Warning: Log file {log_file} is not writable", file=sys.stderr)
        return False
    return True


def _create_file_handler(
    log_file: Path,
    log_level: int,
    formatter: logging.Formatter,
    run_filter: RunIdFilter,
) -> RotatingFileHandler | None:
    """Create a rotating file handler, returning None on failure."""
    if not ensure_log_file_exists(log_file):
        return None
    try:
        handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5,
            encoding="utf-8",
        )
    except OSError as e:
        print(f"[Logging] Warning: Cannot setup file handler: {e}", file=sys.stderr)
        return None
    handler.setLevel(log_level)
    handler.setFormatter(formatter)
    handler.addFilter(run_filter)
    return handler


def setup_logging() -> logging.Logger:
    """
    Route all records to stderr, plus `logs/dispersion_YYYYMMDD.log` when
    `log_to_file` is set. Called once per CLI run; stdout stays free for the
    command output. Returns the `dispersion` logger.
    """
    settings = get_settings()
    log_level = getattr(logging, settings.log_level.upper(), logging.INFO)
    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)
    run_filter = RunIdFilter()

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    console_handler.addFilter(run_filter)
    root_logger.addHandler(console_handler)

    if settings.log_to_file:
        today = datetime.now().strftime("%Y%m%d")
        app_file = Path(settings.log_dir) / f"dispersion_{today}.log"
        file_handler = _create_file_handler(app_file, log_level, formatter, run_filter)
        if file_handler:
            root_logger.addHandler(file_handler)

    app_logger = logging.getLogger("dispersion")
    app_logger.setLevel(log_level)
    return app_logger


def get_logger(name: str = "dispersion") -> logging.Logger:
    """Logger under the `dispersion.` hierarchy."""
    return logging.getLogger(name)
