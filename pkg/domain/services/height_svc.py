"""
Certified Weil heights.

h(alpha) = (log|a| + sum log max(1, |alpha_i|)) / d for the minimal polynomial
a * prod (x - alpha_i). Zero heights are decided exactly by the cyclotomic
divisibility test, never from the numeric enclosure.
"""
from __future__ import annotations

from fractions import Fraction
import logging

from adapters.telemetry.events import EventType, get_event_logger
from adapters.telemetry.tracing import trace_sync_operation
from domain.errors import ConstantPolynomialError
from domain.models.enclosure import RealEnclosure
from domain.models.height import CertStatus, HeightResult
from domain.models.polynomial import IntPolynomial
from domain.services.exact_svc import cyclotomic_test, primitive_part
from domain.services.interval_svc import iv_log_of, iv_refine
from domain.services.roots_svc import isolate_roots, log_abs, log_plus_abs

logger = logging.getLogger(__name__)

SMYTH_POLYNOMIAL = IntPolynomial.of(-1, -1, 0, 1)


def is_kronecker_zero(f: IntPolynomial) -> bool:
    """True iff the roots of f are 0 or roots of unity."""
    return f.coeffs == (0, 1) or cyclotomic_test(f) is not None


@trace_sync_operation("height.weil")
def weil_height(f: IntPolynomial, target_width: float = 1e-12, precision: int = 128, precision_cap: int = 4096) -> HeightResult:
    if f.degree < 1:
        raise ConstantPolynomialError()
    _, f = primitive_part(f)
    d = f.degree

    if is_kronecker_zero(f):
        zero = RealEnclosure.zero(precision)
        return HeightResult(h=zero, exact_zero=True, d=d, mahler_log=zero, precision=precision)

    prec = precision
    h: RealEnclosure | None = None
    mahler: RealEnclosure | None = None
    while True:
        boxes = isolate_roots(f, target_width=target_width / 2, precision=prec, precision_cap=precision_cap)
        total = iv_log_of(abs(f.lead), prec)
        for box in boxes:
            total = total + log_plus_abs(box)
        mahler = iv_refine(mahler, total)
        h = iv_refine(h, _clamp_nonnegative(mahler / d))
        if h.width() <= target_width:
            return HeightResult(h=h, exact_zero=False, d=d, mahler_log=mahler, precision=prec, boxes=tuple(boxes))
        if prec >= precision_cap:
            break
        next_prec = min(2 * prec, precision_cap)
        logger.debug(f"weil_height({f}): width {h.width()} above {target_width}, precision {prec} -> {next_prec}")
        get_event_logger().log_event(EventType.PRECISION_ESCALATED, {"operation": "weil_height", "from": prec, "to": next_prec})
        prec = next_prec

    logger.warning(f"weil_height({f}): indeterminate, width {h.width()} at precision cap {precision_cap}")
    return HeightResult(h=h, exact_zero=False, d=d, mahler_log=mahler, status=CertStatus.INDETERMINATE, precision=prec, boxes=tuple(boxes))


def _clamp_nonnegative(x: RealEnclosure) -> RealEnclosure:
    if x.lower() >= 0:
        return x
    return RealEnclosure(RealEnclosure.zero(x.prec).lo, x.hi, x.prec)


def smyth_reference(target_width: float = 1e-12, precision: int = 128) -> RealEnclosure:
    """h(theta) for the real root theta > 1 of x^3 - x - 1, about 0.0937332."""
    return weil_height(SMYTH_POLYNOMIAL, target_width=target_width, precision=precision).h


def root_product_enclosure(result: HeightResult) -> RealEnclosure | None:
    """sum log|alpha_i| over the certified boxes, or None when some box touches 0."""
    if not result.boxes:
        return None
    prec = result.boxes[0].prec
    total = RealEnclosure.zero(prec)
    for box in result.boxes:
        if box.re.contains_zero() and box.im.contains_zero():
            return None
        total = total + log_abs(box)
    return total


def root_product_holds(f: IntPolynomial, result: HeightResult) -> bool | None:
    """Check that sum log|alpha_i| encloses log|f(0)/a|; None when f(0) = 0 or no boxes are available."""
    if f.coeffs[0] == 0:
        return None
    total = root_product_enclosure(result)
    if total is None:
        return None
    exact = iv_log_of(Fraction(abs(f.coeffs[0]), abs(f.lead)), total.prec)
    return total.intersect(exact) is not None
