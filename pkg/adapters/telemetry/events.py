"""
Structured events for heightcert runs.

Events go to a bounded in-memory buffer and, when a sink file is configured,
are also appended to it as NDJSON. Nothing here feeds back into result files.
"""
from collections import deque
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field, replace
from datetime import UTC, datetime
from enum import Enum
import json
import logging
from pathlib import Path
import time
from typing import Any
import uuid

logger = logging.getLogger(__name__)

MAX_EVENTS = 10_000


class EventType(str, Enum):
    ANALYSIS_STARTED = "analysis.started"
    ANALYSIS_COMPLETED = "analysis.completed"
    ANALYSIS_FAILED = "analysis.failed"

    PRECISION_ESCALATED = "precision.escalated"

    VERIFY_SUITE_COMPLETED = "verify.suite_completed"

    CORPUS_ENTRY_PROCESSED = "corpus.entry_processed"
    CORPUS_COMPLETED = "corpus.completed"


@dataclass
class CertEvent:
    event_type: EventType
    timestamp: datetime
    run_id: str
    subject: str
    event_id: str = field(default_factory=lambda: str(uuid.uuid4()))
    data: dict[str, Any] = field(default_factory=dict)
    duration_ms: float | None = None
    error: str | None = None
    error_type: str | None = None

    def to_dict(self) -> dict[str, Any]:
        result = asdict(self)
        result["timestamp"] = self.timestamp.isoformat()
        result["event_type"] = self.event_type.value
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=str)


class EventLogger:
    """Collects events for one process; optionally mirrors them to an NDJSON file.

    Only the newest `max_events` stay in memory; the file sink keeps everything.
    """

    def __init__(self, events_file: str | Path | None = None, max_events: int = MAX_EVENTS):
        self.events: deque[CertEvent] = deque(maxlen=max_events)
        self.run_id = str(uuid.uuid4())
        self.current_subject: str | None = None
        self.events_file: Path | None = None
        if events_file is not None:
            self.configure_file(events_file)

    def configure_file(self, events_file: str | Path) -> None:
        path = Path(events_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.events_file = path

    def set_subject(self, subject: str | None) -> None:
        self.current_subject = subject

    def log_event(
        self,
        event_type: EventType,
        data: dict[str, Any] | None = None,
        duration_ms: float | None = None,
        error: str | None = None,
        error_type: str | None = None,
        subject: str | None = None,
    ) -> CertEvent:
        event = CertEvent(
            event_type=event_type,
            timestamp=datetime.now(UTC),
            run_id=self.run_id,
            subject=subject or self.current_subject or "unknown",
            data=data or {},
            duration_ms=duration_ms,
            error=error,
            error_type=error_type,
        )
        self.events.append(event)
        if self.events_file is not None:
            self._write_event_to_file(event)

        level = logging.ERROR if error else logging.DEBUG
        logger.log(level, f"[{event_type.value}] {event.subject}: {event.data}")
        return event

    def _write_event_to_file(self, event: CertEvent) -> None:
        try:
            with open(self.events_file, "a", encoding="utf-8") as f:
                f.write(event.to_json() + "\n")
        except OSError as e:
            logger.error(f"Failed to write event to {self.events_file}: {e}")

    def replay(self, events: Iterable[CertEvent]) -> None:
        """Take over events recorded by another process (a corpus worker) under this run id."""
        for event in events:
            event = replace(event, run_id=self.run_id)
            self.events.append(event)
            if self.events_file is not None:
                self._write_event_to_file(event)

    def log_suite_completed(self, suite: str, passed: int, failed: int, indeterminate: int, whitelisted: int) -> CertEvent:
        return self.log_event(
            EventType.VERIFY_SUITE_COMPLETED,
            data={"suite": suite, "passed": passed, "failed": failed, "indeterminate": indeterminate, "whitelisted": whitelisted},
            subject=suite,
        )

    def log_corpus_entry(self, label: str, status: str, index: int) -> CertEvent:
        return self.log_event(EventType.CORPUS_ENTRY_PROCESSED, data={"index": index, "status": status}, subject=label)

    def events_of(self, event_type: EventType) -> list[CertEvent]:
        return [e for e in self.events if e.event_type == event_type]

    def events_for(self, subject: str) -> list[CertEvent]:
        return [e for e in self.events if e.subject == subject]

    def export_events_ndjson(self, subject: str | None = None) -> str:
        selected = self.events_for(subject) if subject else self.events
        return "\n".join(event.to_json() for event in selected)

    def clear(self) -> None:
        self.events.clear()


event_logger = EventLogger()


def get_event_logger() -> EventLogger:
    return event_logger


def configure_event_logger(events_file: str | Path | None) -> EventLogger:
    """Point the global logger at an NDJSON sink, or back to memory-only with None."""
    event_logger.events_file = None
    if events_file is not None:
        event_logger.configure_file(events_file)
    return event_logger


class EventContext:
    """Times a block; emits the matching `.completed` or `.failed` event on exit."""

    def __init__(self, event_type: EventType, subject: str, data: dict[str, Any] | None = None):
        if not event_type.value.endswith(".started"):
            raise ValueError(f"{event_type.value} is not a .started event")
        self.event_type = event_type
        self.subject = subject
        self.data = data or {}
        self.start_time: float | None = None
        self.logger = get_event_logger()

    def __enter__(self) -> "EventContext":
        self.start_time = time.perf_counter()
        self.logger.log_event(self.event_type, data=self.data, subject=self.subject)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:  # noqa: ANN001
        duration_ms = (time.perf_counter() - (self.start_time or 0.0)) * 1000
        suffix = ".failed" if exc_type else ".completed"
        self.logger.log_event(
            EventType(self.event_type.value.replace(".started", suffix)),
            data=self.data,
            duration_ms=duration_ms,
            error=str(exc_val) if exc_type else None,
            error_type=exc_type.__name__ if exc_type else None,
            subject=self.subject,
        )
