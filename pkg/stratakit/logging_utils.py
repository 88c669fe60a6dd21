from __future__ import annotations

import json
import logging
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

LOGGER_NAME = "stratakit"

_CONTEXT_FIELDS = ("command", "algebra", "module_name", "field", "stage", "degree", "status")


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list, frozenset, set)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    return value


def record_context(record: logging.LogRecord) -> dict[str, Any]:
    """Domain fields attached through ``extra=``, in a fixed order."""
    return {key: _plain(getattr(record, key)) for key in _CONTEXT_FIELDS if hasattr(record, key)}


class JsonLogFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        created = datetime.fromtimestamp(record.created, tz=timezone.utc)
        payload: dict[str, Any] = {
            "ts": created.isoformat(timespec="milliseconds"),
            "level": record.levelname.lower(),
            "event": record.getMessage(),
            "where": record.name.removeprefix(f"{LOGGER_NAME}."),
        }
        payload.update(record_context(record))
        if record.exc_info:
            payload["traceback"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=True, default=str)


class TextLogFormatter(logging.Formatter):
    """``LEVEL event key=value ...`` for reading a run in a terminal."""

    def format(self, record: logging.LogRecord) -> str:
        fields = " ".join(f"{k}={v}" for k, v in record_context(record).items())
        line = f"{record.levelname:<7} {record.getMessage()}"
        if fields:
            line = f"{line} {fields}"
        if record.exc_info:
            line = f"{line}\n{self.formatException(record.exc_info)}"
        return line


def _own_handler(logger: logging.Logger) -> logging.Handler | None:
    return next((h for h in logger.handlers if h.get_name() == LOGGER_NAME), None)


def configure_logging(level: str = "WARNING", json_output: bool = True) -> logging.Logger:
    """Attach one stderr handler to the package logger; repeated calls only adjust it.

    Handlers installed by anyone else are left alone.
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level.upper())
    logger.propagate = False
    handler = _own_handler(logger)
    if handler is None:
        handler = logging.StreamHandler()
        handler.set_name(LOGGER_NAME)
        logger.addHandler(handler)
    elif isinstance(handler, logging.StreamHandler):
        handler.stream = sys.stderr
    handler.setFormatter(JsonLogFormatter() if json_output else TextLogFormatter())
    return logger
