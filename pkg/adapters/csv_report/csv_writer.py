"""
CSV rendering of analysis reports.

Floats are the shortest repr of a double; lower endpoints are rounded toward
-inf and upper endpoints toward +inf, so the printed interval still encloses
the certified one. Empty cells mean "not applicable".
"""
from collections.abc import Sequence
import csv
from typing import TextIO

from domain.models.corpus import AnalysisReport
from domain.models.enclosure import RealEnclosure
from ports.report_sink_port import ReportSinkPort

CSV_HEADER = [
    "label",
    "degree",
    "irreducible",
    "root_of_unity_order",
    "galois",
    "h_lo",
    "h_hi",
    "rank_upper",
    "rank_heuristic",
    "log_main_bound",
    "margin_log10",
    "status",
]


def _lo(value: RealEnclosure | None) -> str:
    return "" if value is None else repr(value.lower_float())


def _hi(value: RealEnclosure | None) -> str:
    return "" if value is None else repr(value.upper_float())


def _opt(value: object) -> str:
    return "" if value is None else str(value)


class CsvReportWriter(ReportSinkPort):
    """log_main_bound is printed as its upper endpoint and margin_log10 as its lower one, both conservative."""

    def header(self) -> list[str]:
        return list(CSV_HEADER)

    def row(self, report: AnalysisReport) -> list[str]:
        rank = report.rank
        return [
            report.label,
            str(report.degree),
            report.irreducibility.value if report.irreducibility else "",
            _opt(report.root_of_unity_order),
            report.galois.value,
            _lo(report.h),
            _hi(report.h),
            _opt(rank.rank_upper_certified if rank else None),
            _opt(rank.rank_heuristic if rank else None),
            _hi(report.log_main_bound),
            _lo(report.margin_log10),
            report.status.value,
        ]

    def write(self, reports: Sequence[AnalysisReport], stream: TextIO) -> int:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.header())
        for report in reports:
            writer.writerow(self.row(report))
        return len(reports)
