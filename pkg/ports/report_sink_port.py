from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import TextIO

from domain.models.corpus import AnalysisReport


class ReportSinkPort(ABC):
    """Port for rendering analysis reports to a tabular result file."""

    @abstractmethod
    def header(self) -> list[str]:
        """Column names, fixed for every run."""
        pass

    @abstractmethod
    def row(self, report: AnalysisReport) -> list[str]:
        """Cells for one report, in header order."""
        pass

    @abstractmethod
    def write(self, reports: Sequence[AnalysisReport], stream: TextIO) -> int:
        """
        Write the header and one row per report.

        Returns:
            Number of rows written, header excluded
        """
        pass
