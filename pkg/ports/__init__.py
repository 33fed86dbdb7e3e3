"""
Ports package for heightcert.

Contracts for the I/O adapters around the certified-computation core.
"""

from .corpus_port import CorpusPort
from .report_sink_port import ReportSinkPort

__all__ = [
    "CorpusPort",
    "ReportSinkPort",
]
