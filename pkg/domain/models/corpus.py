from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from domain.models.enclosure import RealEnclosure
from domain.models.galois import GaloisVerdict, RankEstimate
from domain.models.polynomial import IntPolynomial, IrreducibilityStatus


class CorpusEntry(BaseModel):
    """One labelled polynomial, with optional expectations to check the analysis against."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    poly: IntPolynomial
    galois: bool | None = None
    root_of_unity: bool | None = None
    h: str | None = None  # decimal text, kept verbatim
    parse_error: str | None = None  # set for lines that could not be read; poly is then the zero polynomial


class AnalysisStatus(str, Enum):
    OK = "ok"
    INDETERMINATE = "indeterminate"
    NOT_IRREDUCIBLE = "not-irreducible"
    MISMATCH = "mismatch"
    ERROR = "error"


class GaloisStatus(str, Enum):
    CERTIFIED = "certified"
    NO_WITNESS = "no-witness"
    INDETERMINATE = "indeterminate"
    SKIPPED = "skipped"


class AnalysisReport(BaseModel):
    """Everything `heightcert analyze` knows about one polynomial. Log values are natural logs."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    poly: IntPolynomial
    degree: int = 0
    irreducibility: IrreducibilityStatus | None = None
    root_of_unity_order: int | None = None
    exact_zero: bool = False
    h: RealEnclosure | None = None
    mahler_log: RealEnclosure | None = None
    height_precision: int = 0
    root_product_ok: bool | None = None
    galois: GaloisStatus = GaloisStatus.SKIPPED
    galois_verdict: GaloisVerdict | None = None
    rank: RankEstimate | None = None
    reciprocal: bool | None = None
    log_main_bound: RealEnclosure | None = None
    margin_log10: RealEnclosure | None = None
    log_voutier: RealEnclosure | None = None
    log_smyth: RealEnclosure | None = None
    status: AnalysisStatus = AnalysisStatus.OK
    error: str | None = None
    notes: list[str] = Field(default_factory=list)

    @property
    def theorem_applies(self) -> bool:
        return self.galois == GaloisStatus.CERTIFIED and not self.exact_zero and self.h is not None
