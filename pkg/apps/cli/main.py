"""
heightcert command line.

Exit codes are listed in `EXIT_CODES_EPILOG`, which `--help` prints.
"""
from __future__ import annotations

import argparse
from collections.abc import Sequence
from fractions import Fraction
import logging
from pathlib import Path
import sys
from typing import Any

from pydantic import ValidationError

from adapters.corpus_text import TextCorpusAdapter, parse_polynomial
from adapters.csv_report import CsvReportWriter
from adapters.telemetry.events import configure_event_logger
from adapters.telemetry.tracing import setup_telemetry
from domain.errors import HeightCertError, PolynomialParseError
from domain.models.bounds import SuiteReport
from domain.models.corpus import AnalysisReport, AnalysisStatus
from domain.models.enclosure import RealEnclosure
from domain.models.settings import EngineSettings
from domain.services.analysis_svc import AnalysisService, bundled_corpus, run_corpus
from domain.services.bounds_svc import bound_report, decimal_value
from domain.services.verification_svc import SUITES, log_spaced_degrees, run_suite

logger = logging.getLogger("heightcert")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INDETERMINATE = 2
EXIT_VERIFY_FAILED = 3

EXIT_CODES_EPILOG = """exit codes:
  0  success; unreadable corpus lines become status=error rows
  1  usage error, unreadable polynomial or invalid settings
  2  result indeterminate at the precision cap
  3  verification failures outside the expected-failure whitelist
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: ANN201
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _engine_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("engine")
    g.add_argument("--precision-bits", type=int, default=128, help="Working precision of enclosures in bits.")
    g.add_argument("--precision-cap", type=int, default=4096, help="Cap for adaptive precision doubling.")
    g.add_argument("--lll-height-bound", type=int, default=10**6, help="Coefficient bound H for conjugate expressions.")
    g.add_argument("--relation-bound", type=int, default=20, help="Exponent bound B for multiplicative relations.")
    g.add_argument("--target-width", type=float, default=1e-12, help="Width goal for height enclosures.")
    g.add_argument("--jobs", type=int, default=1, help="Worker processes for corpus runs.")
    g.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    g.add_argument("--events", type=Path, default=None, help="Append structured events as NDJSON to this file.")
    g.add_argument("--trace", action="store_true", help="Print OpenTelemetry spans to the console.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _engine_flags()
    parser = _Parser(
        prog="heightcert",
        description="Certified Weil heights, Galois and rank certificates, and audits of explicit height bounds.",
        epilog=EXIT_CODES_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    help_layout: dict[str, Any] = {"epilog": EXIT_CODES_EPILOG, "formatter_class": argparse.RawDescriptionHelpFormatter}

    analyze = sub.add_parser("analyze", parents=[common], **help_layout, help="Analyse one polynomial.")
    analyze.add_argument("poly", nargs="?", help="Coefficients, constant term first, e.g. 1,0,1 (use --poly for a leading minus).")
    analyze.add_argument("--poly", dest="poly_option", help="Same as the positional argument, e.g. --poly=-1,-1,1.")

    bounds = sub.add_parser("bounds", parents=[common], **help_layout, help="Print the explicit lower bounds at a degree.")
    bounds.add_argument("--d", type=int, required=True)
    bounds.add_argument("--rho", type=int, default=None)
    bounds.add_argument("--eps", type=str, default=None, help="Exact decimal or fraction, e.g. 1 or 1/2.")

    verify = sub.add_parser("verify", parents=[common], **help_layout, help="Run an audit suite.")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--max", dest="n_max", type=int, default=None, help="Upper end of n for totient and stirling.")
    verify.add_argument("--rho-max", type=int, default=None)
    verify.add_argument("--d-count", type=int, default=300, help="Number of log-spaced degrees.")
    verify.add_argument("--d-max-exponent", type=int, default=300, help="Largest degree is 10^this.")
    verify.add_argument("--eps", type=str, nargs="+", default=None)

    corpus = sub.add_parser("corpus", parents=[common], **help_layout, help="Analyse a corpus file into CSV.")
    corpus.add_argument("path", nargs="?", type=Path)
    corpus.add_argument("--bundled", action="store_true", help="Use the built-in reference corpus.")
    corpus.add_argument("--out", type=Path, default=None, help="CSV destination, stdout when omitted.")
    corpus.add_argument("--write-bundled", type=Path, default=None, metavar="PATH", help="Write the built-in corpus as text and exit.")
    return parser


def _settings(args: argparse.Namespace) -> EngineSettings:
    return EngineSettings(
        precision_bits=args.precision_bits,
        precision_cap=args.precision_cap,
        embedding_precision=min(256, args.precision_cap),
        lll_height_bound=args.lll_height_bound,
        relation_bound=args.relation_bound,
        target_width=args.target_width,
        jobs=args.jobs,
    )


def _fmt_log(value: RealEnclosure | None) -> str:
    if value is None:
        return "trivial"
    decimal = decimal_value(value)
    text = f"log {value.describe(10)}"
    if decimal is not None:
        text += f"  value {decimal.describe(6)}"
    return text


def _print_analysis(report: AnalysisReport) -> None:
    print(f"label: {report.label}")
    print(f"polynomial: {report.poly}")
    print(f"degree: {report.degree}")
    if report.irreducibility is not None:
        print(f"irreducible: {report.irreducibility.value}")
    print(f"root of unity: {'order ' + str(report.root_of_unity_order) if report.root_of_unity_order else 'none'}")
    if report.exact_zero:
        print("h: 0 (exact)")
    elif report.h is not None:
        print(f"h: {report.h.describe(14)}")
        print(f"log mahler measure: {report.mahler_log.describe(14)}")
    print(f"galois: {report.galois.value}")
    if report.rank is not None:
        rank = report.rank
        print(f"rank: <= {rank.rank_upper_certified} certified, heuristic {rank.rank_heuristic} (exponents up to {rank.search_bound})")
        for relation in rank.relation_basis:
            print(f"  relation {relation.exponents} gives a root of unity of order {relation.order}")
    elif report.status != AnalysisStatus.NOT_IRREDUCIBLE:
        print("rank: n/a")
    if report.log_main_bound is not None:
        print(f"main bound: {_fmt_log(report.log_main_bound)}")
    if report.log_voutier is not None:
        print(f"voutier bound: {_fmt_log(report.log_voutier)}")
    if report.log_smyth is not None:
        print(f"non-reciprocal bound: {_fmt_log(report.log_smyth)}")
    if report.margin_log10 is not None:
        print(f"margin log10(h) - log10(bound): {report.margin_log10.describe(6)}")
    if report.root_product_ok is not None:
        print(f"root product identity: {'ok' if report.root_product_ok else 'VIOLATED'}")
    for note in report.notes:
        print(f"note: {note}")
    if report.error:
        print(f"error: {report.error}")
    print(f"status: {report.status.value}")


def cmd_analyze(args: argparse.Namespace, settings: EngineSettings) -> int:
    text = args.poly_option or args.poly
    if not text:
        raise UsageError("a polynomial is required")
    poly = parse_polynomial(text)
    report = AnalysisService(settings).analyze(poly)
    _print_analysis(report)
    if report.status == AnalysisStatus.INDETERMINATE:
        return EXIT_INDETERMINATE
    if report.status == AnalysisStatus.ERROR:
        return EXIT_USAGE
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace, settings: EngineSettings) -> int:
    if args.d < 1 or (args.rho is not None and args.rho < 1):
        raise UsageError("--d and --rho must be positive")
    eps = Fraction(args.eps) if args.eps is not None else None
    if eps is not None and eps <= 0:
        raise UsageError("--eps must be positive")
    report = bound_report(args.d, rho=args.rho, eps=eps, prec=settings.precision_bits)
    print(f"d={report.d} rho={report.rho if report.rho is not None else '-'} eps={report.eps if report.eps is not None else '-'} precision={report.precision}")
    width = max(len(name) for name in report.entries)
    for name, value in report.entries.items():
        print(f"{name.ljust(width)}  {_fmt_log(value)}")
    if report.g1_argmin is not None:
        print(f"{'g1 argmin r'.ljust(width)}  {report.g1_argmin}")
    for key, value in report.metadata.items():
        print(f"# {key}: {value}")
    return EXIT_OK


def _print_suite(report: SuiteReport) -> None:
    print(
        f"suite {report.suite}: checked {report.checked}, passed {report.passed}, failed {report.failed}, "
        f"indeterminate {report.indeterminate}, whitelisted {report.whitelisted}, precision {report.precision}"
    )
    for point in report.equality_points:
        print(f"equality: {point}")
    for verdict in report.expected_failures:
        print(f"expected: {verdict.describe()}")
    for verdict in report.failures:
        print(f"FAILURE: {verdict.describe()}")


def cmd_verify(args: argparse.Namespace, settings: EngineSettings) -> int:
    d_points = None
    if args.suite in ("chain", "corollary"):
        d_points = log_spaced_degrees(args.d_count, args.d_max_exponent)
    eps_values = [Fraction(e) for e in args.eps] if args.eps else None
    report = run_suite(args.suite, settings, n_max=args.n_max, rho_max=args.rho_max, d_points=d_points, eps_values=eps_values)
    _print_suite(report)
    if report.failed:
        return EXIT_VERIFY_FAILED
    if report.indeterminate:
        return EXIT_INDETERMINATE
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace, settings: EngineSettings) -> int:
    adapter = TextCorpusAdapter()
    if args.write_bundled is not None:
        args.write_bundled.write_text(adapter.write_entries(bundled_corpus()), encoding="utf-8")
        return EXIT_OK
    if args.bundled:
        entries = bundled_corpus()
    elif args.path is not None:
        entries = adapter.read_entries(args.path.read_text(encoding="utf-8"))
    else:
        raise UsageError("give a corpus path or --bundled")

    reports = run_corpus(entries, settings, jobs=settings.jobs)
    writer = CsvReportWriter()
    if args.out is None:
        writer.write(reports, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            writer.write(reports, f)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "bounds": cmd_bounds, "verify": cmd_verify, "corpus": cmd_corpus}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"heightcert: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)
    configure_event_logger(args.events)
    if args.trace:
        setup_telemetry(console=True)

    try:
        settings = _settings(args)
        return COMMANDS[args.command](args, settings)
    except ValidationError as e:
        print(f"heightcert: invalid settings: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, PolynomialParseError, ValueError, OSError) as e:
        print(f"heightcert: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HeightCertError as e:
        logger.error(f"{args.command} did not complete: {e}")
        return EXIT_INDETERMINATE


if __name__ == "__main__":
    raise SystemExit(main())
