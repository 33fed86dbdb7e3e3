from collections.abc import Sequence
import logging
import re

from domain.errors import CorpusParseError, PolynomialParseError
from domain.models.corpus import CorpusEntry
from domain.models.polynomial import IntPolynomial
from ports.corpus_port import CorpusPort

logger = logging.getLogger(__name__)

_INTEGER = re.compile(r"[+-]?\d+")
_DECIMAL = re.compile(r"[+-]?\d+(\.\d+)?([eE][+-]?\d+)?")
_LABEL = re.compile(r"[^:;#\s]+")
_FLAGS = ("galois", "root_of_unity", "h")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse_polynomial(text: str) -> IntPolynomial:
    """Comma-separated integers, constant term first; the last one must be nonzero."""
    cleaned = "".join(_strip_comment(text).split())
    if not cleaned:
        raise PolynomialParseError("empty polynomial")
    parts = cleaned.split(",")
    for part in parts:
        if not _INTEGER.fullmatch(part):
            raise PolynomialParseError(f"not an integer coefficient: {part!r}")
    coeffs = tuple(int(p) for p in parts)
    if all(c == 0 for c in coeffs):
        raise PolynomialParseError("zero polynomial")
    if coeffs[-1] == 0:
        raise PolynomialParseError("last coefficient must be nonzero")
    return IntPolynomial(coeffs)


def format_polynomial(poly: IntPolynomial) -> str:
    return ",".join(str(c) for c in poly.coeffs)


def _parse_flag(key: str, value: str) -> bool | str:
    if key == "h":
        if not _DECIMAL.fullmatch(value):
            raise ValueError(f"h must be a decimal number, got {value!r}")
        return value
    if value not in ("yes", "no"):
        raise ValueError(f"{key} must be yes or no, got {value!r}")
    return value == "yes"


def parse_entry(line: str, line_number: int = 1) -> CorpusEntry | None:
    """One corpus line; None for blank and comment-only lines."""
    body = _strip_comment(line).strip()
    if not body:
        return None
    if ":" not in body:
        raise CorpusParseError(line_number, "expected 'label : coefficients'")
    label, rest = (s.strip() for s in body.split(":", 1))
    if not _LABEL.fullmatch(label):
        raise CorpusParseError(line_number, f"invalid label {label!r}")
    fields = [s.strip() for s in rest.split(";")]
    try:
        poly = parse_polynomial(fields[0])
    except PolynomialParseError as e:
        raise CorpusParseError(line_number, str(e)) from e

    flags: dict[str, bool | str] = {}
    for field in fields[1:]:
        key, sep, value = (s.strip() for s in field.partition("="))
        if not sep or key not in _FLAGS:
            raise CorpusParseError(line_number, f"unknown field {field!r}")
        if key in flags:
            raise CorpusParseError(line_number, f"duplicate field {key!r}")
        try:
            flags[key] = _parse_flag(key, value)
        except ValueError as e:
            raise CorpusParseError(line_number, str(e)) from e
    return CorpusEntry(label=label, poly=poly, **flags)


def unreadable_entry(line: str, error: CorpusParseError) -> CorpusEntry:
    """Stand-in for a line that failed to parse, so the rest of the corpus still runs."""
    head, sep, _ = _strip_comment(line).partition(":")
    label = head.strip() if sep and _LABEL.fullmatch(head.strip()) else f"line-{error.line_number}"
    return CorpusEntry(label=label, poly=IntPolynomial(()), parse_error=str(error))


def format_entry(entry: CorpusEntry) -> str:
    parts = [f"{entry.label} : {format_polynomial(entry.poly)}"]
    if entry.galois is not None:
        parts.append(f"galois={'yes' if entry.galois else 'no'}")
    if entry.root_of_unity is not None:
        parts.append(f"root_of_unity={'yes' if entry.root_of_unity else 'no'}")
    if entry.h is not None:
        parts.append(f"h={entry.h}")
    return " ; ".join(parts)


class TextCorpusAdapter(CorpusPort):
    """Reads and writes the line-oriented corpus format."""

    def parse_polynomial(self, text: str) -> IntPolynomial:
        return parse_polynomial(text)

    def read_entries(self, source: str) -> list[CorpusEntry]:
        """Every non-blank line becomes an entry; unreadable lines carry their parse error."""
        entries = []
        for number, line in enumerate(source.splitlines(), start=1):
            try:
                entry = parse_entry(line, number)
            except CorpusParseError as e:
                logger.warning(f"corpus {e}")
                entry = unreadable_entry(line, e)
            if entry is not None:
                entries.append(entry)
        logger.debug(f"parsed {len(entries)} corpus entries")
        return entries

    def write_entries(self, entries: Sequence[CorpusEntry]) -> str:
        return "".join(format_entry(e) + "\n" for e in entries if e.parse_error is None)
