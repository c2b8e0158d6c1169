"""
Optional OpenTelemetry integration for vtmos-sim.

When opentelemetry-api is installed, this module:
- Wraps analyses and experiment grid points in spans.
- Sets solver attributes (analysis kind, circuit, iterations, steps, status) on them.
- Exposes trace_id and span_id for log correlation (used by VtmosFormatter).

Install the optional extra to enable:
  pip install vtmos-sim[opentelemetry]
"""

from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

_OTEL_AVAILABLE = False
_trace: Any = None

try:
    from opentelemetry import trace

    _trace = trace
    _OTEL_AVAILABLE = True
except ImportError:
    pass

_TRACER_NAME = "vtmos_sim"


@contextmanager
def simulation_span(name: str, **attributes: Any) -> Iterator[None]:
    """
    Run the enclosed block inside a span named ``name``.

    No-op if opentelemetry is not installed.
    """
    if not _OTEL_AVAILABLE:
        yield
        return
    tracer = _trace.get_tracer(_TRACER_NAME)
    with tracer.start_as_current_span(name):
        set_span_attributes(**attributes)
        yield


def set_span_attributes(**attributes: Any) -> None:
    """
    Set ``vtmos_sim.*`` attributes on the current span.

    None values are skipped. No-op without opentelemetry or a recording span.
    """
    if not _OTEL_AVAILABLE:
        return
    try:
        span = _trace.get_current_span()
        if span.is_recording():
            for key, value in attributes.items():
                if value is not None:
                    span.set_attribute(f"vtmos_sim.{key}", value)
    except Exception:
        pass


def get_trace_ids_for_logs() -> dict[str, str]:
    """
    Return trace_id and span_id for the current span for log correlation.

    Returns {} if opentelemetry is not installed or span is invalid.
    """
    if not _OTEL_AVAILABLE:
        return {}
    try:
        ctx = _trace.get_current_span().get_span_context()
        if not ctx or not ctx.is_valid:
            return {}
        return {
            "trace_id": format(ctx.trace_id, "032x"),
            "span_id": format(ctx.span_id, "016x"),
        }
    except Exception:
        return {}
