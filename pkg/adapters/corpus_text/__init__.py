"""
Plain-text corpus format: one `label : c0,c1,...` entry per line.
"""

from .text_corpus import TextCorpusAdapter, format_entry, format_polynomial, parse_entry, parse_polynomial

__all__ = [
    "TextCorpusAdapter",
    "format_entry",
    "format_polynomial",
    "parse_entry",
    "parse_polynomial",
]
