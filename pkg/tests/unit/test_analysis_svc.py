"""
Tests for the analysis service and the corpus runner.
"""

import pytest

from adapters.telemetry.events import EventType, get_event_logger
from domain.models.corpus import AnalysisStatus, CorpusEntry, GaloisStatus
from domain.models.polynomial import IntPolynomial, IrreducibilityStatus
from domain.services.analysis_svc import AnalysisService, bundled_corpus, run_corpus
from domain.services.exact_svc import cyclotomic_polynomial


@pytest.fixture
def service(fast_settings):
    return AnalysisService(fast_settings)


@pytest.mark.unit
class TestAnalyze:
    def test_golden(self, service, golden):
        report = service.analyze(golden, "golden")
        assert report.status == AnalysisStatus.OK
        assert report.irreducibility == IrreducibilityStatus.CERTIFIED
        assert report.root_of_unity_order is None
        assert abs(report.h.mid_float() - 0.24060591252980174) < 1e-11
        assert report.galois == GaloisStatus.CERTIFIED
        assert report.rank.rank_upper_certified == 1
        assert report.root_product_ok is True
        assert report.log_voutier is None
        assert report.log_smyth is not None
        assert report.theorem_applies
        assert report.margin_log10.positive()

    def test_reducible(self, service):
        report = service.analyze(IntPolynomial.of(-1, 0, 1))
        assert report.status == AnalysisStatus.NOT_IRREDUCIBLE
        assert report.h is None
        assert report.galois == GaloisStatus.SKIPPED

    @pytest.mark.parametrize(("coeffs", "message"), [((), "zero polynomial"), ((5,), "constant polynomial")])
    def test_degenerate_inputs(self, service, coeffs, message):
        report = service.analyze(IntPolynomial(coeffs), "bad")
        assert report.status == AnalysisStatus.ERROR
        assert report.error == message

    def test_root_of_unity(self, service):
        report = service.analyze(cyclotomic_polynomial(5))
        assert report.status == AnalysisStatus.OK
        assert report.exact_zero
        assert report.root_of_unity_order == 5
        assert report.margin_log10 is None
        assert report.log_main_bound is not None
        assert report.rank.rank_upper_certified == 0
        assert any("root of unity of order 5" in note for note in report.notes)

    def test_normalises_content_and_sign(self, service):
        report = service.analyze(IntPolynomial.of(0, -3))
        assert report.poly == IntPolynomial.of(0, 1)
        assert report.exact_zero
        assert report.galois == GaloisStatus.CERTIFIED
        assert any("normalised" in note for note in report.notes)

    def test_non_galois(self, service, cube_root_two):
        report = service.analyze(cube_root_two)
        assert report.status == AnalysisStatus.OK
        assert report.galois == GaloisStatus.NO_WITNESS
        assert report.rank is None
        assert report.margin_log10 is None
        assert report.log_voutier is not None

    def test_rational(self, service):
        report = service.analyze(IntPolynomial.of(-3, 2))
        assert report.h.lower_float() <= 1.0986122886681098 <= report.h.upper_float()
        assert report.rank.rank_upper_certified == 1

    def test_indeterminate_height(self, lehmer):
        from domain.models.settings import EngineSettings

        settings = EngineSettings(precision_bits=64, precision_cap=64, embedding_precision=64, target_width=1e-60)
        report = AnalysisService(settings).analyze(lehmer)
        assert report.status == AnalysisStatus.INDETERMINATE

    def test_events(self, service, golden):
        service.analyze(golden, "golden")
        kinds = [e.event_type for e in get_event_logger().events_for("golden")]
        assert kinds[0] == EventType.ANALYSIS_STARTED
        assert kinds[-1] == EventType.ANALYSIS_COMPLETED


@pytest.mark.unit
class TestExpectations:
    def test_matching_expectations(self, service):
        entry = CorpusEntry(label="two", poly=IntPolynomial.of(-2, 1), galois=True, root_of_unity=False, h="0.69314718056")
        assert service.analyze_entry(entry).status == AnalysisStatus.OK

    def test_wrong_height(self, service, golden):
        entry = CorpusEntry(label="golden", poly=golden, h="0.5")
        report = service.analyze_entry(entry)
        assert report.status == AnalysisStatus.MISMATCH
        assert any("h expected 0.5" in note for note in report.notes)

    def test_wrong_root_of_unity(self, service):
        entry = CorpusEntry(label="phi3", poly=cyclotomic_polynomial(3), root_of_unity=False)
        assert service.analyze_entry(entry).status == AnalysisStatus.MISMATCH

    def test_galois_no_with_certificate(self, service, golden):
        entry = CorpusEntry(label="golden", poly=golden, galois=False)
        assert service.analyze_entry(entry).status == AnalysisStatus.MISMATCH

    def test_galois_yes_without_witness_is_a_note(self, service, cube_root_two):
        entry = CorpusEntry(label="cbrt2", poly=cube_root_two, galois=True)
        report = service.analyze_entry(entry)
        assert report.status == AnalysisStatus.OK
        assert any("galois expected yes" in note for note in report.notes)

    def test_non_ok_reports_are_left_alone(self, service):
        entry = CorpusEntry(label="red", poly=IntPolynomial.of(-1, 0, 1), h="7")
        assert service.analyze_entry(entry).status == AnalysisStatus.NOT_IRREDUCIBLE

    def test_unreadable_entry_skips_analysis(self, service):
        entry = CorpusEntry(label="line-3", poly=IntPolynomial(()), h="1", parse_error="line 3: expected 'label : coefficients'")
        report = service.analyze_entry(entry)
        assert report.status == AnalysisStatus.ERROR
        assert report.error == entry.parse_error
        assert get_event_logger().events_of(EventType.ANALYSIS_STARTED) == []


@pytest.mark.unit
class TestRunCorpus:
    def test_order_and_events(self, fast_settings):
        entries = [e for e in bundled_corpus() if e.label in ("golden", "cyclotomic_4", "two", "sqrt3")]
        reports = run_corpus(entries, fast_settings, jobs=1)
        assert [r.label for r in reports] == ["golden", "sqrt3", "cyclotomic_4", "two"]
        assert all(r.status == AnalysisStatus.OK for r in reports)
        processed = get_event_logger().events_of(EventType.CORPUS_ENTRY_PROCESSED)
        assert [e.data["index"] for e in processed] == [0, 1, 2, 3]
        completed = get_event_logger().events_of(EventType.CORPUS_COMPLETED)
        assert completed[-1].data["entries"] == 4
        assert completed[-1].data["statuses"] == {"ok": 4}

    def test_unreadable_entry_becomes_error_row(self, fast_settings):
        entries = [
            CorpusEntry(label="golden", poly=IntPolynomial.of(-1, -1, 1)),
            CorpusEntry(label="bad", poly=IntPolynomial(()), parse_error="line 2: not an integer coefficient: 'x'"),
            CorpusEntry(label="two", poly=IntPolynomial.of(-2, 1)),
        ]
        reports = run_corpus(entries, fast_settings, jobs=1)
        assert [r.label for r in reports] == ["golden", "bad", "two"]
        assert [r.status for r in reports] == [AnalysisStatus.OK, AnalysisStatus.ERROR, AnalysisStatus.OK]
        assert reports[1].error == "line 2: not an integer coefficient: 'x'"
        assert get_event_logger().events_of(EventType.CORPUS_COMPLETED)[-1].data["statuses"] == {"ok": 2, "error": 1}

    def test_worker_events_reach_the_parent(self, fast_settings):
        entries = [CorpusEntry(label=label, poly=IntPolynomial(coeffs)) for label, coeffs in [("golden", (-1, -1, 1)), ("two", (-2, 1))]]
        run_corpus(entries, fast_settings, jobs=2)
        events = get_event_logger()
        completed = events.events_of(EventType.ANALYSIS_COMPLETED)
        assert [e.subject for e in completed] == ["golden", "two"]
        assert {e.run_id for e in completed} == {events.run_id}

    def test_bundled_corpus_shape(self):
        entries = bundled_corpus()
        labels = [e.label for e in entries]
        assert len(labels) == len(set(labels)) == 40
        assert sum(1 for e in entries if e.root_of_unity) == 30
        three_halves = next(e for e in entries if e.label == "three_halves")
        assert three_halves.h == "1.09861228867"


@pytest.mark.slow
def test_bundled_corpus_all_consistent(fast_settings):
    reports = run_corpus(bundled_corpus(), fast_settings, jobs=2)
    assert [r.status for r in reports if r.status != AnalysisStatus.OK] == []
