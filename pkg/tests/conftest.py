"""
Global pytest configuration and fixtures for heightcert tests.
"""
from opentelemetry import trace
import pytest

from adapters.telemetry.events import configure_event_logger, get_event_logger
from adapters.telemetry.tracing import TelemetryManager
from domain.models.polynomial import IntPolynomial
from domain.models.settings import EngineSettings


@pytest.fixture(autouse=True)
def quiet_events():
    """Keep events in memory and start every test from an empty log."""
    configure_event_logger(None)
    get_event_logger().clear()
    yield
    get_event_logger().clear()


@pytest.fixture
def reset_telemetry_state():
    if TelemetryManager._instance is not None:
        TelemetryManager._instance.reset()
    yield
    if TelemetryManager._instance is not None:
        TelemetryManager._instance.reset()


@pytest.fixture
def noop_tracer():
    return trace.NoOpTracer()


@pytest.fixture
def golden() -> IntPolynomial:
    """x^2 - x - 1."""
    return IntPolynomial.of(-1, -1, 1)


@pytest.fixture
def lehmer() -> IntPolynomial:
    return IntPolynomial.of(1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)


@pytest.fixture
def smyth() -> IntPolynomial:
    """x^3 - x - 1."""
    return IntPolynomial.of(-1, -1, 0, 1)


@pytest.fixture
def cube_root_two() -> IntPolynomial:
    return IntPolynomial.of(-2, 0, 0, 1)


@pytest.fixture
def fast_settings() -> EngineSettings:
    """Defaults with a lower cap so failures surface quickly."""
    return EngineSettings(precision_bits=128, precision_cap=1024, target_width=1e-12)
