from .csv_writer import CSV_HEADER, CsvReportWriter

__all__ = [
    "CSV_HEADER",
    "CsvReportWriter",
]
