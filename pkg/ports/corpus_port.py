from abc import ABC, abstractmethod
from collections.abc import Sequence

from domain.models.corpus import CorpusEntry
from domain.models.polynomial import IntPolynomial


class CorpusPort(ABC):
    """Port for reading and writing labelled polynomial corpora."""

    @abstractmethod
    def parse_polynomial(self, text: str) -> IntPolynomial:
        """
        Parse one polynomial written as coefficients, constant term first.

        Raises:
            PolynomialParseError: malformed text or zero polynomial
        """
        pass

    @abstractmethod
    def read_entries(self, source: str) -> list[CorpusEntry]:
        """
        Parse a whole corpus.

        Args:
            source: Corpus text

        Returns:
            Entries in file order. A line that fails to parse still yields an
            entry, with `parse_error` holding the message and line number.
        """
        pass

    @abstractmethod
    def write_entries(self, entries: Sequence[CorpusEntry]) -> str:
        """Canonical text for `entries`; read_entries of the result gives them back."""
        pass
