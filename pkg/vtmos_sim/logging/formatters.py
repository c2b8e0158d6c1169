"""Structured logging formatters for vtmos-sim."""

import json
import logging
from datetime import datetime, timezone
from typing import Any

# Fields promoted to the top level of each JSON record.
STRUCTURED_FIELDS = (
    "circuit",
    "analysis",
    "experiment",
    "stage",
    "iterations",
    "sim_time",
    "duration_seconds",
    "accepted_steps",
    "rejected_steps",
    "status",
    "error_type",
)

_RESERVED = {
    "name",
    "msg",
    "args",
    "levelname",
    "levelno",
    "pathname",
    "filename",
    "module",
    "lineno",
    "funcName",
    "created",
    "msecs",
    "relativeCreated",
    "thread",
    "threadName",
    "processName",
    "process",
    "message",
    "exc_info",
    "exc_text",
    "stack_info",
    "taskName",
    "trace_id",
    "span_id",
    *STRUCTURED_FIELDS,
}


class VtmosFormatter(logging.Formatter):
    """
    JSON formatter for structured logging in vtmos-sim.

    Every record carries timestamp, level, logger and message. Simulation
    context (circuit title, analysis kind, experiment id, Newton stage,
    iteration counts, simulated time, wall time, status) is promoted to the
    top level when present; anything else passed through ``extra`` lands in
    an ``extra`` object.
    """

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record as JSON."""
        log_entry: dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        for key in STRUCTURED_FIELDS:
            if hasattr(record, key):
                log_entry[key] = getattr(record, key)

        try:
            from vtmos_sim.observability.opentelemetry import get_trace_ids_for_logs

            trace_ids = get_trace_ids_for_logs()
            if trace_ids:
                log_entry["trace_id"] = trace_ids.get("trace_id")
                log_entry["span_id"] = trace_ids.get("span_id")
        except Exception:
            pass

        extra_fields = {
            key: value
            for key, value in record.__dict__.items()
            if key not in _RESERVED
        }
        if extra_fields:
            log_entry["extra"] = extra_fields

        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str)
