"""
Tests for the plain-text corpus adapter.
"""
import pytest

from adapters.corpus_text import TextCorpusAdapter, format_entry, parse_entry, parse_polynomial
from domain.errors import CorpusParseError, PolynomialParseError
from domain.models.corpus import CorpusEntry
from domain.models.polynomial import IntPolynomial
from domain.services.analysis_svc import bundled_corpus


@pytest.mark.unit
class TestParsePolynomial:
    def test_constant_term_first(self):
        assert parse_polynomial("-1,-1,1") == IntPolynomial.of(-1, -1, 1)

    def test_whitespace_and_signs(self):
        assert parse_polynomial(" 2 , +0 ,\t-3 ") == IntPolynomial.of(2, 0, -3)

    def test_comment_stripped(self):
        assert parse_polynomial("1,0,1  # x^2 + 1") == IntPolynomial.of(1, 0, 1)

    @pytest.mark.parametrize("text", ["", "   ", "1,,2", "1,a", "1.5,2", "0,0,0", "1,2,0", "# only a comment"])
    def test_rejects(self, text):
        with pytest.raises(PolynomialParseError):
            parse_polynomial(text)

    def test_large_coefficients(self):
        big = 10**40
        assert parse_polynomial(f"{big},1").coeffs == (big, 1)


@pytest.mark.unit
class TestParseEntry:
    def test_full_entry(self):
        entry = parse_entry("golden : -1,-1,1 ; galois=yes ; root_of_unity=no ; h=0.24060591253")
        assert entry == CorpusEntry(label="golden", poly=IntPolynomial.of(-1, -1, 1), galois=True, root_of_unity=False, h="0.24060591253")

    def test_minimal_entry(self):
        entry = parse_entry("p:1,1")
        assert entry.label == "p"
        assert entry.galois is None and entry.h is None

    @pytest.mark.parametrize("line", ["", "   ", "# comment", "  # indented comment"])
    def test_blank_lines(self, line):
        assert parse_entry(line) is None

    def test_trailing_comment(self):
        assert parse_entry("lehmer : 1,1,0,-1,-1,-1,-1,-1,0,1,1  # Lehmer").label == "lehmer"

    @pytest.mark.parametrize(
        ("line", "fragment"),
        [
            ("no colon here", "expected"),
            ("bad label : 1,1", "invalid label"),
            ("x : 1,1 ; colour=red", "unknown field"),
            ("x : 1,1 ; galois=maybe", "yes or no"),
            ("x : 1,1 ; h=abc", "decimal"),
            ("x : 1,1 ; galois=yes ; galois=no", "duplicate"),
            ("x : 1,0", "nonzero"),
        ],
    )
    def test_errors_carry_line_number(self, line, fragment):
        with pytest.raises(CorpusParseError) as exc:
            parse_entry(line, line_number=7)
        assert exc.value.line_number == 7
        assert fragment in str(exc.value)


@pytest.mark.unit
class TestTextCorpusAdapter:
    def test_read_entries_keeps_order(self):
        source = "# corpus\n\na : 1,1\nb : -2,1 ; h=0.69314718056\n\nc : 1,0,1 ; root_of_unity=yes\n"
        entries = TextCorpusAdapter().read_entries(source)
        assert [e.label for e in entries] == ["a", "b", "c"]
        assert entries[2].root_of_unity is True

    def test_unreadable_line_becomes_error_entry(self):
        entries = TextCorpusAdapter().read_entries("a : 1,1\n\n# note\nb : 1,x\nc : 1,0,1\n")
        assert [e.label for e in entries] == ["a", "b", "c"]
        assert entries[1].parse_error == "line 4: not an integer coefficient: 'x'"
        assert entries[1].poly.is_zero
        assert entries[0].parse_error is None and entries[2].parse_error is None

    @pytest.mark.parametrize(
        ("line", "label"),
        [("no colon here", "line-1"), ("bad label : 1,1", "line-1"), ("ok : 1,1 ; colour=red", "ok")],
    )
    def test_unreadable_line_label(self, line, label):
        (entry,) = TextCorpusAdapter().read_entries(line)
        assert entry.label == label
        assert entry.parse_error.startswith("line 1: ")

    def test_unreadable_entries_are_not_written(self):
        adapter = TextCorpusAdapter()
        entries = adapter.read_entries("a : 1,1\nb : 1,x\n")
        assert adapter.write_entries(entries) == "a : 1,1\n"


    def test_bundled_corpus_survives_text_form(self):
        adapter = TextCorpusAdapter()
        entries = bundled_corpus()
        assert adapter.read_entries(adapter.write_entries(entries)) == entries

    def test_format_entry(self):
        entry = CorpusEntry(label="two", poly=IntPolynomial.of(-2, 1), galois=True, h="0.69314718056")
        assert format_entry(entry) == "two : -2,1 ; galois=yes ; h=0.69314718056"
