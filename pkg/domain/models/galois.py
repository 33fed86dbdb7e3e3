"""
Certificates produced by the Galois and multiplicative-rank searches.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from domain.models.polynomial import FieldElement


@dataclass(frozen=True)
class LatticeBasis:
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> LatticeBasis:
        return cls(tuple(tuple(int(c) for c in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def dimension(self) -> int:
        return len(self.rows[0]) if self.rows else 0


@dataclass(frozen=True)
class ConjugateExpression:
    """alpha_index = p(alpha_base); `certified` means f(p(x)) = 0 mod f was checked exactly."""

    index: int
    p: tuple[Fraction, ...]
    certified: bool

    def as_element(self, modulus) -> FieldElement:  # noqa: ANN001
        return FieldElement(modulus, self.p)

    def max_height(self) -> int:
        return max((max(abs(c.numerator), c.denominator) for c in self.p), default=0)


@dataclass(frozen=True)
class CertifiedGalois:
    expressions: tuple[ConjugateExpression, ...]
    precision: int

    @property
    def is_certified(self) -> bool:
        return True


@dataclass(frozen=True)
class NoWitness:
    """No conjugate expression with coefficients below `height_bound` was found; one-sided, not a proof."""

    height_bound: int
    precision: int
    failed_index: int | None = None

    @property
    def is_certified(self) -> bool:
        return False


GaloisVerdict = CertifiedGalois | NoWitness


@dataclass(frozen=True)
class Relation:
    """prod alpha_i^{e_i} is a root of unity of the recorded order."""

    exponents: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class RelationSearchResult:
    relations: tuple[Relation, ...]
    numeric_candidates: tuple[tuple[int, ...], ...]
    partial: bool = False


@dataclass(frozen=True)
class RankEstimate:
    num_conjugates: int
    relation_basis: tuple[Relation, ...]
    rank_upper_certified: int
    rank_heuristic: int
    search_bound: int
    partial: bool = False
    notes: tuple[str, ...] = field(default=())
