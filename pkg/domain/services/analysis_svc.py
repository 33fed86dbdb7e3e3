"""
End-to-end analysis of one polynomial, and the corpus runner built on it.
"""
from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
import logging
import math

from adapters.telemetry.events import CertEvent, EventContext, EventType, configure_event_logger, get_event_logger
from adapters.telemetry.tracing import record_certificate_metrics, trace_operation, trace_sync_operation
from domain.errors import HeightCertError, MissingGaloisWitnessError, PrecisionCapError
from domain.models.corpus import AnalysisReport, AnalysisStatus, CorpusEntry, GaloisStatus
from domain.models.galois import CertifiedGalois
from domain.models.height import CertStatus
from domain.models.polynomial import IntPolynomial, IrreducibilityStatus
from domain.models.settings import DEFAULT_SETTINGS, EngineSettings
from domain.services.bounds_svc import main_bound, smyth_bound, voutier
from domain.services.exact_svc import (
    cyclotomic_polynomial,
    cyclotomic_test,
    first_primes,
    irreducibility_status,
    is_reciprocal,
    primitive_part,
)
from domain.services.galois_svc import is_galois, mult_rank
from domain.services.height_svc import root_product_holds, weil_height
from domain.services.interval_svc import iv_log, iv_log_of

logger = logging.getLogger(__name__)

# expected h values in corpus files carry 11 decimals
EXPECTED_H_TOLERANCE = Fraction(1, 10**10)


class AnalysisService:
    def __init__(self, settings: EngineSettings = DEFAULT_SETTINGS):
        self.settings = settings
        self.primes = first_primes(settings.sieve_prime_count)

    def analyze(self, poly: IntPolynomial, label: str | None = None) -> AnalysisReport:
        """Run every certified computation on `poly`; each stage degrades into a note instead of failing the report."""
        label = label or str(poly)
        if poly.is_zero:
            return AnalysisReport(label=label, poly=poly, status=AnalysisStatus.ERROR, error="zero polynomial")
        if poly.degree < 1:
            return AnalysisReport(label=label, poly=poly, status=AnalysisStatus.ERROR, error="constant polynomial")

        with EventContext(EventType.ANALYSIS_STARTED, label, {"degree": poly.degree}):
            return self._analyze(poly, label)

    @trace_sync_operation("analysis.analyze")
    def _analyze(self, poly: IntPolynomial, label: str) -> AnalysisReport:
        s = self.settings
        _, f = primitive_part(poly)
        report = AnalysisReport(label=label, poly=f, degree=f.degree)
        if f != poly:
            report.notes.append(f"normalised to {f}")

        report.irreducibility = irreducibility_status(f, self.primes)
        if report.irreducibility == IrreducibilityStatus.REDUCIBLE:
            report.status = AnalysisStatus.NOT_IRREDUCIBLE
            report.notes.append("input is not irreducible over Q; no minimal polynomial to analyse")
            return report
        if report.irreducibility == IrreducibilityStatus.ASSUMED:
            report.notes.append(f"irreducibility assumed: the sieve over {len(self.primes)} primes did not certify it")

        report.root_of_unity_order = cyclotomic_test(f)
        report.reciprocal = is_reciprocal(f)

        with trace_operation("analysis.height", {"label": label}) as span:
            height = weil_height(f, target_width=s.target_width, precision=s.precision_bits, precision_cap=s.precision_cap)
            record_certificate_metrics(span, f.degree, height.precision, height.status.value)
        report.exact_zero = height.exact_zero
        report.h = height.h
        report.mahler_log = height.mahler_log
        report.height_precision = height.precision
        if height.status == CertStatus.INDETERMINATE:
            report.status = AnalysisStatus.INDETERMINATE
            report.notes.append(f"height width {height.h.width():.3g} above target {s.target_width:g} at the precision cap")
        if not height.exact_zero:
            report.root_product_ok = root_product_holds(f, height)

        self._galois_and_rank(f, report)
        self._bounds(f, report)
        return report

    def _galois_and_rank(self, f: IntPolynomial, report: AnalysisReport) -> None:
        s = self.settings
        if f.coeffs == (0, 1):
            report.galois = GaloisStatus.CERTIFIED
            report.notes.append("alpha = 0: rank 0, outside the multiplicative group")
            return
        try:
            verdict = is_galois(f, height_bound=s.lll_height_bound, embedding_precision=s.embedding_precision, precision_cap=s.precision_cap)
        except PrecisionCapError as e:
            report.galois = GaloisStatus.INDETERMINATE
            report.status = AnalysisStatus.INDETERMINATE
            report.notes.append(str(e))
            return
        report.galois_verdict = verdict
        if not isinstance(verdict, CertifiedGalois):
            report.galois = GaloisStatus.NO_WITNESS
            report.notes.append(f"no conjugate expression with coefficients below H={s.lll_height_bound}; rank n/a")
            return
        report.galois = GaloisStatus.CERTIFIED
        try:
            report.rank = mult_rank(
                f,
                exponent_bound=s.relation_bound,
                galois=verdict,
                precision=s.embedding_precision,
                max_coefficient_bits=s.max_coefficient_bits,
            )
        except (MissingGaloisWitnessError, PrecisionCapError) as e:
            report.notes.append(f"rank not available: {e}")
            return
        report.notes.extend(report.rank.notes)

    def _bounds(self, f: IntPolynomial, report: AnalysisReport) -> None:
        prec = self.settings.precision_bits
        d = f.degree
        report.log_main_bound = main_bound(d, prec)
        report.log_voutier = voutier(d, prec)
        if report.reciprocal is False and not report.exact_zero:
            report.log_smyth = smyth_bound(d, prec)

        if report.exact_zero:
            order = report.root_of_unity_order
            what = f"root of unity of order {order}" if order else "alpha = 0"
            report.notes.append(f"{what}: h = 0, theorem hypothesis not met")
            return
        if report.galois != GaloisStatus.CERTIFIED:
            report.notes.append("Q(alpha)/Q not certified Galois; bound comparison skipped")
            return
        if report.h is None or not report.h.positive():
            report.notes.append("height enclosure does not exclude 0; bound comparison skipped")
            return
        report.margin_log10 = (iv_log(report.h) - report.log_main_bound) / iv_log_of(10, prec)

    def check_expectations(self, entry: CorpusEntry, report: AnalysisReport) -> AnalysisReport:
        """Compare a report with the expectations written in a corpus entry; contradictions set MISMATCH."""
        if report.status != AnalysisStatus.OK:
            return report
        problems: list[str] = []
        if entry.root_of_unity is not None and entry.root_of_unity != report.exact_zero:
            problems.append(f"root_of_unity expected {entry.root_of_unity}")
        if entry.galois is False and report.galois == GaloisStatus.CERTIFIED:
            problems.append("galois expected no, certificate found")
        if entry.galois is True and report.galois == GaloisStatus.NO_WITNESS:
            report.notes.append("galois expected yes, no witness within the search bound")
        if entry.h is not None and report.h is not None:
            expected = Fraction(entry.h)
            if not report.h.widened(EXPECTED_H_TOLERANCE).contains(expected):
                problems.append(f"h expected {entry.h}, outside {report.h.describe()}")
        if problems:
            report.status = AnalysisStatus.MISMATCH
            report.notes.extend(problems)
        return report

    def analyze_entry(self, entry: CorpusEntry) -> AnalysisReport:
        if entry.parse_error is not None:
            logger.error(f"corpus entry {entry.label} skipped: {entry.parse_error}")
            return AnalysisReport(label=entry.label, poly=entry.poly, status=AnalysisStatus.ERROR, error=entry.parse_error)
        try:
            report = self.analyze(entry.poly, entry.label)
        except HeightCertError as e:
            logger.error(f"analysis of {entry.label} failed: {e}")
            report = AnalysisReport(label=entry.label, poly=entry.poly, degree=max(entry.poly.degree, 0), status=AnalysisStatus.ERROR, error=str(e))
        return self.check_expectations(entry, report)


def _analyze_in_worker(args: tuple[EngineSettings, CorpusEntry]) -> tuple[AnalysisReport, list[CertEvent]]:
    """Worker side of a parallel run; the events go back to the parent, which owns the sink."""
    settings, entry = args
    events = configure_event_logger(None)
    events.clear()
    report = AnalysisService(settings).analyze_entry(entry)
    return report, list(events.events)


@trace_sync_operation("analysis.run_corpus")
def run_corpus(entries: Sequence[CorpusEntry], settings: EngineSettings = DEFAULT_SETTINGS, jobs: int | None = None) -> list[AnalysisReport]:
    """Analyse every entry; results come back in input order whatever the job count."""
    jobs = jobs or settings.jobs
    events = get_event_logger()
    if jobs > 1 and len(entries) > 1:
        reports: list[AnalysisReport] = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for report, worker_events in pool.map(_analyze_in_worker, [(settings, e) for e in entries]):
                events.replay(worker_events)
                reports.append(report)
    else:
        service = AnalysisService(settings)
        reports = [service.analyze_entry(e) for e in entries]

    for index, report in enumerate(reports):
        events.log_corpus_entry(report.label, report.status.value, index)
    counts: dict[str, int] = {}
    for report in reports:
        counts[report.status.value] = counts.get(report.status.value, 0) + 1
    events.log_event(EventType.CORPUS_COMPLETED, {"entries": len(reports), "statuses": counts, "jobs": jobs}, subject="corpus")
    logger.info(f"corpus: {len(reports)} entries, statuses {counts}")
    return reports


def bundled_corpus() -> list[CorpusEntry]:
    """Small reference corpus with known answers."""
    entries = [
        CorpusEntry(label="golden", poly=IntPolynomial.of(-1, -1, 1), galois=True, root_of_unity=False, h="0.24060591253"),
        CorpusEntry(label="sqrt2", poly=IntPolynomial.of(-2, 0, 1), galois=True, root_of_unity=False, h="0.34657359028"),
        CorpusEntry(label="sqrt3", poly=IntPolynomial.of(-3, 0, 1), galois=True, root_of_unity=False, h="0.54930614433"),
        CorpusEntry(label="i_sqrt2", poly=IntPolynomial.of(2, 0, 1), galois=True, root_of_unity=False, h="0.34657359028"),
        CorpusEntry(label="inv_sqrt2", poly=IntPolynomial.of(-1, 0, 2), galois=True, root_of_unity=False, h="0.34657359028"),
    ]
    for n in range(1, 31):
        entries.append(CorpusEntry(label=f"cyclotomic_{n}", poly=cyclotomic_polynomial(n), galois=True, root_of_unity=True, h="0"))
    entries += [
        CorpusEntry(label="cube_root2", poly=IntPolynomial.of(-2, 0, 0, 1), galois=False, root_of_unity=False, h="0.23104906018"),
        CorpusEntry(label="smyth", poly=IntPolynomial.of(-1, -1, 0, 1), galois=False, root_of_unity=False),
        CorpusEntry(label="lehmer", poly=IntPolynomial.of(1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1), galois=False, root_of_unity=False, h="0.01623576120"),
        CorpusEntry(label="three_halves", poly=IntPolynomial.of(-3, 2), galois=True, root_of_unity=False, h=_decimal(math.log(3))),
        CorpusEntry(label="two", poly=IntPolynomial.of(-2, 1), galois=True, root_of_unity=False, h=_decimal(math.log(2))),
    ]
    return entries


def _decimal(value: float) -> str:
    return f"{value:.11f}"
