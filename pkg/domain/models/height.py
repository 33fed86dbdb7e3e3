from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from domain.models.enclosure import ComplexBox, RealEnclosure


class CertStatus(str, Enum):
    OK = "ok"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class HeightResult:
    """Weil height h and log Mahler measure of the roots of f, both in nats; h = mahler_log / d."""

    h: RealEnclosure
    exact_zero: bool
    d: int
    mahler_log: RealEnclosure
    status: CertStatus = CertStatus.OK
    precision: int = 0
    boxes: tuple[ComplexBox, ...] = field(default=(), repr=False)
