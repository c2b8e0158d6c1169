"""Optional tracing hooks."""

from vtmos_sim.observability.opentelemetry import (
    get_trace_ids_for_logs,
    set_span_attributes,
    simulation_span,
)

__all__ = ["get_trace_ids_for_logs", "set_span_attributes", "simulation_span"]
