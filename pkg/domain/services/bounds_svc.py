"""
Explicit lower bounds for heights and the audit of the inequalities behind them.

Every bound is carried as an enclosure of its natural logarithm: c(eps) and
g1 at large parameters are far outside the double range. Inequalities are
compared on the same log scale, and verdicts other than INDETERMINATE need
disjoint enclosures or an exact integer argument.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable
from fractions import Fraction
from functools import lru_cache
import logging
from math import factorial

from adapters.telemetry.tracing import trace_sync_operation
from domain.errors import EnclosureDomainError
from domain.models.bounds import BoundReport, ChainVerdict, Inequality, ParameterPoint, Verdict
from domain.models.enclosure import DEFAULT_PRECISION, Ordering, RealEnclosure
from domain.services.exact_svc import totient
from domain.services.height_svc import SMYTH_POLYNOMIAL
from domain.services.interval_svc import iv_compare, iv_exp, iv_log, iv_log_of, iv_loglog_of, iv_min, iv_pi, iv_pow

logger = logging.getLogger(__name__)

__all__ = [
    "N_RHO_TABLE",
    "bound_report",
    "c_eps_log",
    "decimal_value",
    "g1",
    "g1_with_argmin",
    "g2",
    "main_bound",
    "n_rho",
    "nonunit_bound",
    "product_bound",
    "relative_dobrowolski",
    "smyth_bound",
    "stirling_check",
    "totient",
    "totient_lemma_check",
    "verify_chain",
    "with_adaptive_precision",
    "voutier",
]

# Maximal orders of finite subgroups of GL_rho(Q) for rho = 2, 4, 6..10; the
# published table prints these pairs with its two rows swapped.
N_RHO_TABLE: dict[int, int] = {
    2: 12,
    4: 1152,
    6: 103680,
    7: 2903040,
    8: 696729600,
    9: 1393459200,
    10: 8360755200,
}
N_RHO_TABLE_NOTE = "n(rho) read as rho -> n(rho): (2,12) (4,1152) (6,103680) (7,2903040) (8,696729600) (9,1393459200) (10,8360755200)"

LOG_DECIMAL_LIMIT = 700
WHITELIST_LOG3D = 16


def _log(value: Fraction | int, prec: int) -> RealEnclosure:
    return iv_log_of(value, prec)


def _q(value: Fraction | int | float | str) -> Fraction:
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def _t_pow(d: int, exponent: Fraction, prec: int) -> RealEnclosure:
    """log(3d)^exponent."""
    return iv_pow(_log(3 * d, prec), exponent)


def decimal_value(log_value: RealEnclosure | None) -> RealEnclosure | None:
    """exp of a log-scale enclosure, or None when it would leave the representable range."""
    if log_value is None or not log_value.is_finite:
        return None
    if abs(log_value.lower()) >= LOG_DECIMAL_LIMIT or abs(log_value.upper()) >= LOG_DECIMAL_LIMIT:
        return None
    return iv_exp(log_value)


# -- exact combinatorics ----------------------------------------------------


def n_rho(rho: int) -> int:
    """Maximal order of a finite subgroup of GL_rho(Q)."""
    if rho < 1:
        raise ValueError("n(rho) is defined for rho >= 1")
    if rho in N_RHO_TABLE:
        return N_RHO_TABLE[rho]
    return factorial(rho) * 2**rho


def totient_lemma_check(n: int, prec: int = DEFAULT_PRECISION) -> tuple[ChainVerdict, ChainVerdict]:
    """Both totient inequalities at n: n/phi(n) <= loglog(3n)/loglog(3), and phi(n) >= sqrt(n/2)."""
    if n < 1:
        raise ValueError("n must be positive")
    phi = totient(n)
    point = ParameterPoint(n=n)

    lhs = _log(Fraction(n, phi), prec)
    rhs = iv_log(iv_loglog_of(3 * n, prec)) - iv_log(iv_loglog_of(3, prec))
    if n == phi:
        # only n = 1; both sides are exactly 1
        ratio = ChainVerdict("totient-ratio", point, Verdict.HOLDS, lhs, rhs, equality=True, precision=prec)
    else:
        ratio = _verdict("totient-ratio", point, lhs, rhs, prec)

    # sqrt(n/2) <= phi  <=>  n <= 2 phi^2, decided on integers
    lhs_sqrt = _log(Fraction(n, 2), prec) * Fraction(1, 2)
    rhs_sqrt = _log(phi, prec)
    square = 2 * phi * phi
    verdict = Verdict.HOLDS if n <= square else Verdict.FAILS
    root = ChainVerdict("totient-sqrt", point, verdict, lhs_sqrt, rhs_sqrt, equality=n == square, precision=prec)
    return ratio, root


def stirling_check(n: int, prec: int = DEFAULT_PRECISION, n_factorial: int | None = None) -> ChainVerdict:
    """n!/n^n <= sqrt(2 pi n) e^(1/(12n)) e^(-n), the left side exact."""
    if n < 1:
        raise ValueError("n must be positive")
    if n_factorial is None:
        n_factorial = factorial(n)
    lhs = _log(Fraction(n_factorial, n**n), prec)
    rhs = iv_log(iv_pi(prec) * (2 * n)) * Fraction(1, 2) + Fraction(1, 12 * n) - n
    return _verdict("stirling", ParameterPoint(n=n), lhs, rhs, prec)


# -- the bounds ---------------------------------------------------------------


def voutier(d: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure | None:
    """log of (1/4d)(loglog d / log d)^3; None (trivial) for d < 3."""
    if d < 3:
        return None
    log_d = _log(d, prec)
    return 3 * (iv_log(iv_log(log_d)) - iv_log(log_d)) - _log(4 * d, prec)


def product_bound(n: int, degree: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log of D^-1 (1050 n^5 log(3D))^(-n^2 (n+1)^2), a lower bound for h(a_1)...h(a_n)."""
    if n < 1 or degree < 1:
        raise ValueError("n and D must be positive")
    base = _log(1050 * n**5, prec) + iv_loglog_of(3 * degree, prec)
    return -_log(degree, prec) - base * (n * n * (n + 1) ** 2)


def relative_dobrowolski(degree: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log of D^-1 (loglog 5D)^3 / (log 2D)^4."""
    if degree < 1:
        raise ValueError("D must be positive")
    return 3 * iv_log(iv_loglog_of(5 * degree, prec)) - 4 * iv_loglog_of(2 * degree, prec) - _log(degree, prec)


@lru_cache(maxsize=1 << 16)
def _g1_term(r: int, d: int, prec: int) -> RealEnclosure:
    return _log(d, prec) * Fraction(1, r) + (_log(1050 * r**5, prec) + iv_loglog_of(3 * d, prec)) * (r * (r + 1) ** 2)


@lru_cache(maxsize=1 << 17)
def _g1_prefix(rho: int, d: int, prec: int) -> tuple[RealEnclosure, int]:
    term = _g1_term(rho, d, prec)
    if rho == 1:
        return term, 1
    best, argmin = _g1_prefix(rho - 1, d, prec)
    if iv_compare(term, best) == Ordering.LESS:
        return term, rho
    return iv_min(best, term), argmin


def g1_with_argmin(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> tuple[RealEnclosure, int]:
    """log of min over 1 <= r <= rho of d^(1/r) (1050 r^5 log 3d)^(r (r+1)^2), and the minimizing r."""
    if rho < 1 or d < 1:
        raise ValueError("rho and d must be positive")
    for r in range(1, rho):
        _g1_prefix(r, d, prec)
    return _g1_prefix(rho, d, prec)


def g1(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    return g1_with_argmin(rho, d, prec)[0]


@lru_cache(maxsize=1 << 16)
def g2(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log of 6.5e7 rho^(rho+5) loglog(6 d^2)^5."""
    if rho < 1 or d < 1:
        raise ValueError("rho and d must be positive")
    return _log(65_000_000, prec) + (rho + 5) * _log(rho, prec) + 5 * iv_log(iv_loglog_of(6 * d * d, prec))


@lru_cache(maxsize=1 << 12)
def main_bound(d: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log of 1e-8 exp(-(49/2) log(3d)^(3/4) loglog(3d))."""
    if d < 1:
        raise ValueError("d must be positive")
    return _log(Fraction(1, 10**8), prec) - Fraction(49, 2) * _t_pow(d, Fraction(3, 4), prec) * iv_loglog_of(3 * d, prec)


def c_eps_log(eps: Fraction | int | float | str, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log c(eps) = log 1e-8 - eps log 3 - 181 (724/5eps)^4 - (724/5eps)^5."""
    eps = _q(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    q = Fraction(724, 5) / eps
    return _log(Fraction(1, 10**8), prec) - eps * _log(3, prec) - (181 * q**4 + q**5)


@lru_cache(maxsize=16)
def _smyth_log_theta(prec: int) -> RealEnclosure:
    """log of the real root theta of x^3 - x - 1, by exact bisection."""
    lo, hi = Fraction(1), Fraction(2)
    while hi - lo > Fraction(1, 2 ** (prec + 8)):
        mid = (lo + hi) / 2
        if SMYTH_POLYNOMIAL(mid) > 0:
            hi = mid
        else:
            lo = mid
    return iv_log(RealEnclosure.from_bounds(lo, hi, prec))


def smyth_bound(d: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log of log(theta)/d, the lower bound for heights of non-reciprocal algebraic numbers."""
    if d < 1:
        raise ValueError("d must be positive")
    return iv_log(_smyth_log_theta(prec)) - _log(d, prec)


def nonunit_bound(d: int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    """log of log(2)/d, valid for algebraic numbers that are not units."""
    if d < 1:
        raise ValueError("d must be positive")
    return iv_loglog_of(2, prec) - _log(d, prec)


def bound_report(d: int, rho: int | None = None, eps: Fraction | float | str | None = None, prec: int = DEFAULT_PRECISION) -> BoundReport:
    if d < 1:
        raise ValueError("d must be positive")
    eps_q = _q(eps) if eps is not None else None
    entries: dict[str, RealEnclosure | None] = {}
    indeterminate: list[str] = []
    argmin: int | None = None

    def put(name: str, compute: Callable[[], RealEnclosure | None]) -> None:
        try:
            entries[name] = compute()
        except EnclosureDomainError as e:
            logger.warning(f"bound_report(d={d}): {name} not evaluable: {e}")
            entries[name] = None
            indeterminate.append(name)

    put("voutier", lambda: voutier(d, prec))
    for n in (1, 2, 3):
        put(f"product_bound_n{n}", lambda n=n: product_bound(n, d, prec))
    put("relative_dobrowolski", lambda: relative_dobrowolski(d, prec))
    if rho is not None:
        value, argmin = g1_with_argmin(rho, d, prec)
        entries["g1"] = value
        put("g2", lambda: g2(rho, d, prec))
    put("main_bound", lambda: main_bound(d, prec))
    if eps_q is not None:
        put("c_eps", lambda: c_eps_log(eps_q, prec))
        put("c_eps_over_d_eps", lambda: c_eps_log(eps_q, prec) - eps_q * _log(d, prec))
    put("smyth", lambda: smyth_bound(d, prec))
    put("nonunit", lambda: nonunit_bound(d, prec))

    metadata = {"scale": "natural log", "n_rho_table": N_RHO_TABLE_NOTE}
    if rho is not None:
        metadata["n_rho"] = n_rho(rho)
    return BoundReport(d=d, rho=rho, eps=eps_q, precision=prec, entries=entries, g1_argmin=argmin, indeterminate=indeterminate, metadata=metadata)


# -- inequality audit -----------------------------------------------------------


def _verdict(name: str, point: ParameterPoint, lhs: RealEnclosure, rhs: RealEnclosure, prec: int, whitelist: bool = False) -> ChainVerdict:
    order = iv_compare(lhs, rhs)
    if order == Ordering.LESS:
        verdict = Verdict.HOLDS
    elif order == Ordering.GREATER:
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.INDETERMINATE
    return ChainVerdict(name, point, verdict, lhs, rhs, whitelisted=whitelist and verdict != Verdict.HOLDS, precision=prec)


def with_adaptive_precision(check: Callable[[int], ChainVerdict], prec: int, cap: int) -> ChainVerdict:
    while True:
        result = check(prec)
        if result.verdict != Verdict.INDETERMINATE or prec >= cap:
            if result.verdict == Verdict.INDETERMINATE:
                logger.warning(f"{result.describe()} at precision cap {cap}")
            return result
        logger.debug(f"({result.inequality}) at {result.point}: indeterminate at {prec} bits, retrying")
        prec = min(2 * prec, cap)


def check_lemma_constant(rho: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(a) 718 sqrt(2 pi rho) e^(1/(12 rho)) (2/e)^rho <= 1440."""
    lhs = _log(718, prec) + iv_log(iv_pi(prec) * (2 * rho)) * Fraction(1, 2) + Fraction(1, 12 * rho) + rho * (_log(2, prec) - 1)
    return _verdict(Inequality.LEMMA_CONSTANT.value, ParameterPoint(rho=rho), lhs, _log(1440, prec), prec)


def check_subgroup_order(rho: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(b) n(rho) <= 135 rho! 2^(rho-1), on integers."""
    lhs_int = n_rho(rho)
    rhs_int = 135 * factorial(rho) * 2 ** (rho - 1)
    verdict = Verdict.HOLDS if lhs_int <= rhs_int else Verdict.FAILS
    return ChainVerdict(
        Inequality.SUBGROUP_ORDER.value,
        ParameterPoint(rho=rho),
        verdict,
        _log(lhs_int, prec),
        _log(rhs_int, prec),
        equality=lhs_int == rhs_int,
        precision=prec,
    )


def check_lemma_degree_sum(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(c) X log(2X)^4 <= g2(rho, d) with X = 1440 rho^rho loglog(6 d^2)."""
    log_x = _log(1440, prec) + rho * _log(rho, prec) + iv_log(iv_loglog_of(6 * d * d, prec))
    lhs = log_x + 4 * iv_log(_log(2, prec) + log_x)
    return _verdict(Inequality.LEMMA_DEGREE_SUM.value, ParameterPoint(d=d, rho=rho), lhs, g2(rho, d, prec), prec)


def check_small_rank(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(d) g2(rho, d) <= 6.5e7 exp(3.5 log(3d)^(1/4) loglog(3d))."""
    rhs = _log(65_000_000, prec) + Fraction(7, 2) * _t_pow(d, Fraction(1, 4), prec) * iv_loglog_of(3 * d, prec)
    return _verdict(Inequality.SMALL_RANK.value, ParameterPoint(d=d, rho=rho), g2(rho, d, prec), rhs, prec)


def check_large_rank(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(e) g1(rho, d) <= 31693 exp(log(3d)^(3/4) + 13.5 log(3d)^(3/4) loglog(3d)).

    The closing estimate of this step needs log(3d) >= 16; failures below that are whitelisted.
    """
    t3 = _t_pow(d, Fraction(3, 4), prec)
    rhs = _log(31693, prec) + t3 + Fraction(27, 2) * t3 * iv_loglog_of(3 * d, prec)
    small = _log(3 * d, prec).upper() < WHITELIST_LOG3D
    return _verdict(Inequality.LARGE_RANK.value, ParameterPoint(d=d, rho=rho), g1(rho, d, prec), rhs, prec, whitelist=small)


def check_theorem(rho: int, d: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(f) min(g1, g2) <= 6.5e7 exp(24.5 log(3d)^(3/4) loglog(3d))."""
    lhs = iv_min(g1(rho, d, prec), g2(rho, d, prec))
    rhs = _log(65_000_000, prec) + Fraction(49, 2) * _t_pow(d, Fraction(3, 4), prec) * iv_loglog_of(3 * d, prec)
    return _verdict(Inequality.THEOREM.value, ParameterPoint(d=d, rho=rho), lhs, rhs, prec)


def check_corollary(d: int, eps: Fraction, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(g) log c(eps) - eps log d <= log main_bound(d)."""
    lhs = c_eps_log(eps, prec) - eps * _log(d, prec)
    return _verdict(Inequality.COROLLARY.value, ParameterPoint(d=d, eps=eps), lhs, main_bound(d, prec), prec)


def check_lemma_degree_closing(rho: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(h) 12448 log(4884^(1/rho) rho)^4 <= 6.5e7 rho."""
    inner = _log(4884, prec) * Fraction(1, rho) + _log(rho, prec)
    lhs = _log(12448, prec) + 4 * iv_log(inner)
    rhs = _log(65_000_000 * rho, prec)
    return _verdict(Inequality.LEMMA_DEGREE_CLOSING.value, ParameterPoint(rho=rho), lhs, rhs, prec)


def check_corollary_loglog(d: int, prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(i) (49/2) log(3d)^(3/4) loglog(3d) <= 181 log(3d)^(4/5)."""
    lhs = iv_log(Fraction(49, 2) * _t_pow(d, Fraction(3, 4), prec) * iv_loglog_of(3 * d, prec))
    rhs = _log(181, prec) + iv_log(_t_pow(d, Fraction(4, 5), prec))
    return _verdict(Inequality.COROLLARY_LOGLOG.value, ParameterPoint(d=d), lhs, rhs, prec)


def check_totient_constant(prec: int = DEFAULT_PRECISION) -> ChainVerdict:
    """(k) 135 / (2 loglog 3) <= 718."""
    lhs = _log(135, prec) - _log(2, prec) - iv_log(iv_loglog_of(3, prec))
    return _verdict(Inequality.TOTIENT_CONSTANT.value, ParameterPoint(), lhs, _log(718, prec), prec)


def _rank_regime(rho: int, d: int, prec: int) -> tuple[bool, bool]:
    """(small, large): whether rho <= log(3d)^(1/4), resp. rho >= it; both when undecided."""
    order = iv_compare(RealEnclosure.exact(rho**4, prec), _log(3 * d, prec))
    if order == Ordering.LESS:
        return True, False
    if order == Ordering.GREATER:
        return False, True
    return True, True


def _as_point(point: ParameterPoint | tuple) -> ParameterPoint:
    if isinstance(point, ParameterPoint):
        return point
    d, rho, *rest = point
    eps = _q(rest[0]) if rest and rest[0] is not None else None
    return ParameterPoint(d=d, rho=rho, eps=eps)


@trace_sync_operation("bounds.verify_chain")
def verify_chain(
    points: Iterable[ParameterPoint | tuple],
    prec: int = DEFAULT_PRECISION,
    precision_cap: int = 4096,
    only: Iterable[Inequality | str] | None = None,
) -> list[ChainVerdict]:
    """Audit the inequality chain at each (d, rho, eps) point.

    Steps that only involve rho run when rho is set, steps in d when d is set,
    and the corollary step when d and eps are set. (d) and (e) run only in
    their regime of rho against log(3d)^(1/4). `only` restricts the steps.
    """
    wanted = None if only is None else {Inequality(i) for i in only}
    verdicts: list[ChainVerdict] = []
    for raw in points:
        point = _as_point(raw)
        d, rho, eps = point.d, point.rho, point.eps
        if (d is not None and d < 1) or (rho is not None and rho < 1):
            raise ValueError(f"invalid parameter point {point}")
        checks: list[tuple[Inequality, Callable[[int], ChainVerdict]]] = []
        if rho is not None:
            checks += [
                (Inequality.LEMMA_CONSTANT, lambda p, rho=rho: check_lemma_constant(rho, p)),
                (Inequality.SUBGROUP_ORDER, lambda p, rho=rho: check_subgroup_order(rho, p)),
                (Inequality.LEMMA_DEGREE_CLOSING, lambda p, rho=rho: check_lemma_degree_closing(rho, p)),
                (Inequality.TOTIENT_CONSTANT, check_totient_constant),
            ]
        if d is not None and rho is not None:
            small, large = _rank_regime(rho, d, prec)
            checks.append((Inequality.LEMMA_DEGREE_SUM, lambda p, rho=rho, d=d: check_lemma_degree_sum(rho, d, p)))
            if small:
                checks.append((Inequality.SMALL_RANK, lambda p, rho=rho, d=d: check_small_rank(rho, d, p)))
            if large:
                checks.append((Inequality.LARGE_RANK, lambda p, rho=rho, d=d: check_large_rank(rho, d, p)))
            checks.append((Inequality.THEOREM, lambda p, rho=rho, d=d: check_theorem(rho, d, p)))
        if d is not None:
            checks.append((Inequality.COROLLARY_LOGLOG, lambda p, d=d: check_corollary_loglog(d, p)))
            if eps is not None:
                checks.append((Inequality.COROLLARY, lambda p, d=d, eps=eps: check_corollary(d, eps, p)))
        verdicts.extend(with_adaptive_precision(check, prec, precision_cap) for step, check in checks if wanted is None or step in wanted)
    return verdicts
