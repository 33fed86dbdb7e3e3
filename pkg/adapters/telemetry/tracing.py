"""
OpenTelemetry tracing for heightcert.

Tracing is off unless enabled from the command line; until then the API's
no-op tracer is handed out, so decorated services cost one function call.
"""
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from functools import wraps
import logging
from typing import Any, TypeVar

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

logger = logging.getLogger(__name__)

SERVICE_NAME = "heightcert"
SERVICE_VERSION = "0.1.0"

F = TypeVar("F", bound=Callable[..., Any])


class TelemetryManager:
    """Process-wide tracer configuration (one instance per process)."""

    _instance: "TelemetryManager | None" = None
    tracer_provider: TracerProvider | None
    tracer: trace.Tracer | None
    initialized: bool

    def __new__(cls) -> "TelemetryManager":
        if cls._instance is None:
            manager = super().__new__(cls)
            manager.tracer_provider = None
            manager.tracer = None
            manager.initialized = False
            cls._instance = manager
        return cls._instance

    def reset(self) -> None:
        """Shut the provider down and forget the instance. Tests only."""
        if self.tracer_provider is not None:
            self.tracer_provider.shutdown()
        TelemetryManager._instance = None

    def setup_tracing(self, console: bool = True) -> None:
        if self.initialized:
            return
        provider = TracerProvider(resource=Resource.create({"service.name": SERVICE_NAME, "service.version": SERVICE_VERSION}))
        if console:
            provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
        self.tracer_provider = provider
        self.tracer = provider.get_tracer(SERVICE_NAME, SERVICE_VERSION)
        self.initialized = True
        logger.info(f"tracing enabled (console exporter: {console})")

    def get_tracer(self) -> trace.Tracer:
        return self.tracer if self.tracer is not None else trace.NoOpTracer()


def get_tracer() -> trace.Tracer:
    return TelemetryManager().get_tracer()


def setup_telemetry(console: bool = True) -> TelemetryManager:
    manager = TelemetryManager()
    manager.setup_tracing(console=console)
    return manager


@contextmanager
def trace_operation(name: str, attributes: dict[str, Any] | None = None, tracer: trace.Tracer | None = None) -> Iterator[trace.Span]:
    """Span around a block; an escaping exception is recorded and marks the span as failed."""
    with (tracer or get_tracer()).start_as_current_span(name) as span:
        add_span_attributes(span, attributes or {})
        try:
            yield span
        except Exception as e:
            span.record_exception(e)
            span.set_status(trace.Status(trace.StatusCode.ERROR, str(e)))
            raise


def trace_sync_operation(operation_name: str, attributes: dict[str, Any] | None = None) -> Callable[[F], F]:
    """Decorator form of `trace_operation` for service functions."""

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            with trace_operation(operation_name, attributes) as span:
                span.set_attribute("function.name", func.__name__)
                span.set_attribute("function.module", func.__module__)
                result = func(*args, **kwargs)
                span.set_status(trace.Status(trace.StatusCode.OK))
                return result

        return wrapper  # type: ignore[return-value]

    return decorator


def add_span_attributes(span: trace.Span, attributes: dict[str, Any]) -> None:
    """Copy attributes onto a span, skipping None values."""
    for key, value in attributes.items():
        if value is not None:
            span.set_attribute(key, value)


def record_certificate_metrics(span: trace.Span, degree: int, precision: int, status: str) -> None:
    """Attach the outcome of a certified computation to its span."""
    span.set_attribute("heightcert.degree", degree)
    span.set_attribute("heightcert.precision", precision)
    span.set_attribute("heightcert.status", status)
