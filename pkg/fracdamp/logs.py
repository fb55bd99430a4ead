"""JSON log formatting for the CLI (stdout stays reserved for CSV)."""

from __future__ import annotations

import json
import logging
import sys
from typing import Any

SERVICE_NAME = "fracdamp"


class JsonFormatter(logging.Formatter):
    """One JSON object per record, for journald/Loki style collectors."""

    def format(self, record: logging.LogRecord) -> str:
        entry: dict[str, Any] = {
            "timestamp": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "level": record.levelname,
            "service": SERVICE_NAME,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        if record.exc_info and record.exc_info[0]:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry)


def configure_logging(level: str = "WARNING") -> None:
    """Route the root logger to stderr through :class:`JsonFormatter`."""
    root = logging.getLogger()
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonFormatter())
    root.addHandler(handler)
