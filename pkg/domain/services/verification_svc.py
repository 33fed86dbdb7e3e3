"""
Suite runners behind `heightcert verify`.

Each runner walks a parameter range, feeds verdicts into a SuiteReport and
logs one `verify.suite_completed` event. Ranges are walked in increasing order
so the g1 prefix cache in bounds_svc is filled bottom-up.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
import logging

import mpmath

from adapters.telemetry.events import get_event_logger
from adapters.telemetry.tracing import trace_sync_operation
from domain.models.bounds import Inequality, ParameterPoint, SuiteReport
from domain.models.settings import DEFAULT_SETTINGS, EngineSettings
from domain.services.bounds_svc import (
    check_lemma_constant,
    check_lemma_degree_closing,
    check_subgroup_order,
    check_totient_constant,
    stirling_check,
    totient_lemma_check,
    verify_chain,
    with_adaptive_precision,
)
from domain.services.interval_svc import iv_loglog_of

logger = logging.getLogger(__name__)

SUITES = ("totient", "stirling", "nrho", "constant", "chain", "corollary")

DEFAULT_EPS_VALUES: tuple[Fraction, ...] = (Fraction(1, 10), Fraction(1, 2), Fraction(1), Fraction(2))
TOTIENT_BLOCK = 4096


def log_spaced_degrees(count: int = 300, max_exponent: int = 300) -> list[int]:
    """Integers floor(10^(k * max_exponent / (count - 1))), k = 0..count-1, duplicates dropped."""
    if count < 1 or max_exponent < 0:
        raise ValueError("count must be positive and max_exponent nonnegative")
    if count == 1:
        return [1]
    ctx = mpmath.MPContext()
    ctx.prec = int(max_exponent * 3.33) + 64
    seen: dict[int, None] = {}
    for k in range(count):
        exponent = Fraction(k * max_exponent, count - 1)
        value = int(ctx.floor(ctx.power(10, ctx.mpf(exponent.numerator) / exponent.denominator)))
        seen.setdefault(max(1, value), None)
    return list(seen)


def _totients(n_max: int) -> list[int]:
    phi = list(range(n_max + 1))
    for p in range(2, n_max + 1):
        if phi[p] == p:
            for m in range(p, n_max + 1, p):
                phi[m] -= phi[m] // p
    return phi


def _finish(report: SuiteReport) -> SuiteReport:
    logger.info(
        f"suite {report.suite}: {report.checked} checked, {report.passed} passed, {report.failed} failed, "
        f"{report.indeterminate} indeterminate, {report.whitelisted} whitelisted"
    )
    get_event_logger().log_suite_completed(report.suite, report.passed, report.failed, report.indeterminate, report.whitelisted)
    return report


@trace_sync_operation("verify.totient")
def verify_totient_range(n_max: int = 10**6, prec: int = 128) -> SuiteReport:
    """Both totient inequalities for every n <= n_max.

    The ratio side is settled per block from one certified lower bound of
    loglog(3a)/loglog(3) at the block start (the right side increases with n);
    any n it does not settle goes through totient_lemma_check.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    report = SuiteReport(suite="totient", precision=prec)
    phi = _totients(n_max)
    loglog3 = iv_loglog_of(3, prec)
    for start in range(1, n_max + 1, TOTIENT_BLOCK):
        stop = min(start + TOTIENT_BLOCK, n_max + 1)
        bound = (iv_loglog_of(3 * start, prec) / loglog3).lower()
        num, den = bound.numerator, bound.denominator
        settled = 0
        for n in range(start, stop):
            p = phi[n]
            exact_case = n == 1 or n == 2 * p * p
            if not exact_case and n * den < num * p and n <= 2 * p * p:
                settled += 2
                continue
            for verdict in totient_lemma_check(n, prec):
                report.record(verdict)
        report.add_passed(settled)
    return _finish(report)


@trace_sync_operation("verify.stirling")
def verify_stirling_range(n_max: int = 5000, prec: int = 128, precision_cap: int = 4096) -> SuiteReport:
    if n_max < 1:
        raise ValueError("n_max must be positive")
    report = SuiteReport(suite="stirling", precision=prec)
    fact = 1
    for n in range(1, n_max + 1):
        fact *= n
        report.record(with_adaptive_precision(lambda p, n=n, fact=fact: stirling_check(n, p, fact), prec, precision_cap))
    return _finish(report)


def verify_nrho_range(rho_max: int = 30, prec: int = 128) -> SuiteReport:
    """n(rho) <= 135 rho! 2^(rho-1); equality is expected exactly at rho = 8."""
    report = SuiteReport(suite="nrho", precision=prec)
    for rho in range(1, rho_max + 1):
        report.record(check_subgroup_order(rho, prec))
    return _finish(report)


def verify_constant_range(rho_max: int = 1000, prec: int = 128, precision_cap: int = 4096) -> SuiteReport:
    report = SuiteReport(suite="constant", precision=prec)
    report.record(with_adaptive_precision(check_totient_constant, prec, precision_cap))
    for rho in range(1, rho_max + 1):
        report.record(with_adaptive_precision(lambda p, rho=rho: check_lemma_constant(rho, p), prec, precision_cap))
        report.record(with_adaptive_precision(lambda p, rho=rho: check_lemma_degree_closing(rho, p), prec, precision_cap))
    return _finish(report)


@trace_sync_operation("verify.chain")
def verify_chain_grid(d_points: Sequence[int], rho_max: int = 200, prec: int = 128, precision_cap: int = 4096) -> SuiteReport:
    """Steps (c) to (f) at every (d, rho) with rho <= min(d, rho_max), and (i) per d."""
    report = SuiteReport(suite="chain", precision=prec)
    rank_steps = (Inequality.LEMMA_DEGREE_SUM, Inequality.SMALL_RANK, Inequality.LARGE_RANK, Inequality.THEOREM)
    for d in d_points:
        points = [ParameterPoint(d=d, rho=rho) for rho in range(1, min(d, rho_max) + 1)]
        for verdict in verify_chain(points, prec, precision_cap, only=rank_steps):
            report.record(verdict)
        for verdict in verify_chain([ParameterPoint(d=d)], prec, precision_cap, only=[Inequality.COROLLARY_LOGLOG]):
            report.record(verdict)
    return _finish(report)


@trace_sync_operation("verify.corollary")
def verify_corollary_grid(d_points: Sequence[int], eps_values: Iterable[Fraction] = DEFAULT_EPS_VALUES, prec: int = 128, precision_cap: int = 4096) -> SuiteReport:
    report = SuiteReport(suite="corollary", precision=prec)
    eps_values = tuple(eps_values)
    points = [ParameterPoint(d=d, eps=eps) for d in d_points for eps in eps_values]
    for verdict in verify_chain(points, prec, precision_cap, only=[Inequality.COROLLARY]):
        report.record(verdict)
    return _finish(report)


def run_suite(
    suite: str,
    settings: EngineSettings = DEFAULT_SETTINGS,
    n_max: int | None = None,
    rho_max: int | None = None,
    d_points: Sequence[int] | None = None,
    eps_values: Iterable[Fraction] | None = None,
) -> SuiteReport:
    """Run one named suite with its default range unless overridden."""
    prec, cap = settings.precision_bits, settings.precision_cap
    if suite == "totient":
        return verify_totient_range(n_max or 10**6, prec)
    if suite == "stirling":
        return verify_stirling_range(n_max or 5000, prec, cap)
    if suite == "nrho":
        return verify_nrho_range(rho_max or 30, prec)
    if suite == "constant":
        return verify_constant_range(rho_max or 1000, prec, cap)
    if suite == "chain":
        return verify_chain_grid(d_points or log_spaced_degrees(), rho_max or 200, prec, cap)
    if suite == "corollary":
        return verify_corollary_grid(d_points or log_spaced_degrees(), eps_values or DEFAULT_EPS_VALUES, prec, cap)
    raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
