"""
Centralized logging configuration for fraccomp
"""

import logging
import logging.config
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from fraccomp.util.constants import LOG_DIR, LOG_DIR_ENV, LOG_LEVEL_ENV, PACKAGE_NAME


def _file_handler(path: Path, level: str) -> Dict[str, Any]:
    return {"class": "logging.FileHandler", "level": level, "formatter": "json",
            "filename": str(path), "mode": "a", "encoding": "utf-8"}


def logging_dict(log_level: str, log_file: Path, errors_file: Path) -> Dict[str, Any]:
    """
    Builds the `dictConfig` of a run. Console shows plain messages at the requested level,
    log files keep JSON records with diagnostics passed in `extra`. Warnings (aliasing of
    spectral grids among others) go through `py.warnings` to both.

    :param log_level: Level of the package loggers and of the console.
    :param log_file: Log of the run.
    :param errors_file: Shared log of errors over runs.
    :return: Logging configuration.
    """
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "plain": {"format": "%(levelname)s - %(name)s - %(message)s"},
            "json": {"format": "%(asctime)s %(name)s %(levelname)s %(filename)s %(lineno)d %(message)s",
                     "class": "pythonjsonlogger.jsonlogger.JsonFormatter"},
        },
        "handlers": {
            "console": {"class": "logging.StreamHandler", "level": log_level, "formatter": "plain",
                        "stream": "ext://sys.stderr"},
            "run_file": _file_handler(log_file, "DEBUG"),
            "error_file": _file_handler(errors_file, "ERROR"),
        },
        "loggers": {
            PACKAGE_NAME: {"level": log_level, "handlers": ["console", "run_file", "error_file"],
                           "propagate": False},
            "py.warnings": {"level": "WARNING", "handlers": ["console", "run_file"], "propagate": False},
            "matplotlib": {"level": "WARNING", "handlers": ["run_file"], "propagate": False},
        },
        "root": {"level": "WARNING", "handlers": ["console", "run_file"]},
    }


def setup_logging(log_level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """
    Set up centralized logging configuration.

    :param log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL), env FRACCOMP_LOG_LEVEL by default
    :param log_file: Optional log file path, a timestamped file in FRACCOMP_LOG_DIR by default
    :return: Configured package logger
    """
    if log_level is None:
        log_level = os.getenv(LOG_LEVEL_ENV, "INFO")
    log_level = log_level.upper()

    logs_dir = Path(os.getenv(LOG_DIR_ENV, LOG_DIR))
    logs_dir.mkdir(parents=True, exist_ok=True)
    if log_file is None:
        log_file = logs_dir / f"{PACKAGE_NAME}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"

    logging.config.dictConfig(logging_dict(log_level, Path(log_file), logs_dir / "errors.log"))
    logging.captureWarnings(True)

    logger = logging.getLogger(PACKAGE_NAME)
    logger.debug("Logging initialized", extra={"log_level": log_level, "log_file": str(log_file)})

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger instance.

    :param name: Logger name (defaults to fraccomp)
    :return: Logger instance
    """
    if name is None:
        name = PACKAGE_NAME
    elif not name.startswith(PACKAGE_NAME):
        name = f"{PACKAGE_NAME}.{name}"

    return logging.getLogger(name)
