from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from domain.models.enclosure import RealEnclosure


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


class Inequality(str, Enum):
    """Steps of the lower-bound argument audited by verify_chain."""

    LEMMA_CONSTANT = "a"
    SUBGROUP_ORDER = "b"
    LEMMA_DEGREE_SUM = "c"
    SMALL_RANK = "d"
    LARGE_RANK = "e"
    THEOREM = "f"
    COROLLARY = "g"
    LEMMA_DEGREE_CLOSING = "h"
    COROLLARY_LOGLOG = "i"
    TOTIENT_CONSTANT = "k"


@dataclass(frozen=True)
class ParameterPoint:
    d: int | None = None
    rho: int | None = None
    eps: Fraction | None = None
    n: int | None = None

    def __str__(self) -> str:
        parts = [f"{name}={value}" for name, value in (("d", self.d), ("rho", self.rho), ("eps", self.eps), ("n", self.n)) if value is not None]
        return ",".join(parts)


@dataclass(frozen=True)
class ChainVerdict:
    """One inequality LHS <= RHS at one parameter point, compared on log scale.

    `margin` is log(RHS) - log(LHS). HOLDS and FAILS are only reported when the
    margin enclosure excludes 0, except for `equality`, which is decided exactly.
    """

    inequality: str
    point: ParameterPoint
    verdict: Verdict
    lhs_log: RealEnclosure | None = None
    rhs_log: RealEnclosure | None = None
    equality: bool = False
    whitelisted: bool = False
    precision: int = 0

    @property
    def margin(self) -> RealEnclosure | None:
        if self.lhs_log is None or self.rhs_log is None:
            return None
        if self.equality:
            return RealEnclosure.zero(self.lhs_log.prec)
        return self.rhs_log - self.lhs_log

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.HOLDS

    def describe(self) -> str:
        margin = self.margin
        shown = margin.describe(6) if margin is not None else "n/a"
        flags = " (equality)" if self.equality else ""
        flags += " (whitelisted)" if self.whitelisted else ""
        return f"({self.inequality}) at {self.point}: {self.verdict.value}{flags}, log margin {shown}"


class BoundReport(BaseModel):
    """Log-scale values of the explicit lower bounds at one (d, rho, eps).

    An entry of None is the "trivial" sentinel: the formula gives no positive bound there.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(..., ge=1)
    rho: int | None = None
    eps: Fraction | None = None
    precision: int
    entries: dict[str, RealEnclosure | None]
    g1_argmin: int | None = None
    indeterminate: list[str] = Field(default_factory=list)
    metadata: dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    suite: str
    checked: int = 0
    passed: int = 0
    failed: int = 0
    indeterminate: int = 0
    whitelisted: int = 0
    failures: list[ChainVerdict] = Field(default_factory=list)
    expected_failures: list[ChainVerdict] = Field(default_factory=list)
    equality_points: list[str] = Field(default_factory=list)
    precision: int = 0
    notes: list[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.indeterminate == 0

    def add_passed(self, count: int) -> None:
        """Count instances settled in bulk, without a verdict object each."""
        self.checked += count
        self.passed += count

    def record(self, verdict: ChainVerdict) -> None:
        self.checked += 1
        self.precision = max(self.precision, verdict.precision)
        if verdict.equality:
            self.equality_points.append(f"({verdict.inequality}) {verdict.point}")
        if verdict.verdict == Verdict.HOLDS:
            self.passed += 1
        elif verdict.whitelisted:
            self.whitelisted += 1
            self.expected_failures.append(verdict)
        elif verdict.verdict == Verdict.FAILS:
            self.failed += 1
            self.failures.append(verdict)
        else:
            self.indeterminate += 1
            self.failures.append(verdict)
