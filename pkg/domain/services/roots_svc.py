"""
Certified isolation of the complex roots of a squarefree integer polynomial.

Candidates come from Aberth-Ehrlich iteration in a private mpmath context.
They are then rounded to dyadic points z_i = (X_i + i Y_i) / 2^e and certified
exactly: with the Weierstrass corrections W_i = f(z_i) / (a prod_{j != i} (z_i - z_j))
every root lies in the union of the disks |z - z_i| <= n |W_i|, and a disk
disjoint from all others holds exactly one root. The corrections are computed
in Gaussian integers, so the certificate involves no rounding at all.
"""
from __future__ import annotations

from fractions import Fraction
import logging
from math import isqrt

import mpmath
from sympy.polys.domains import ZZ
from sympy.polys.rootisolation import dup_count_real_roots

from adapters.telemetry.events import EventType, get_event_logger
from adapters.telemetry.tracing import trace_sync_operation
from domain.errors import ConstantPolynomialError, NotSquarefreeError, PrecisionCapError
from domain.models.enclosure import ComplexBox, RealEnclosure, raw_to_fraction
from domain.models.polynomial import IntPolynomial
from domain.services.exact_svc import squarefree_check
from domain.services.interval_svc import iv_log, iv_max

logger = logging.getLogger(__name__)

Rect = tuple[RealEnclosure, RealEnclosure]

GUARD_BITS = 16


def _aberth(f: IntPolynomial, prec: int) -> list[mpmath.mpc]:
    ctx = mpmath.MPContext()
    ctx.prec = prec + GUARD_BITS
    n = f.degree
    coeffs = [ctx.mpf(c) for c in f.coeffs]
    dcoeffs = [ctx.mpf(k * f.coeffs[k]) for k in range(1, n + 1)]

    const = abs(f.coeffs[0])
    radius = ctx.root(ctx.mpf(const) / abs(f.lead), n) if const else ctx.mpf(1)
    z = [radius * ctx.expj(2 * ctx.pi * k / n + ctx.mpf("0.7")) for k in range(n)]
    tol = ctx.ldexp(1, -(prec + 4))

    for _ in range(100 + 20 * n):
        worst = ctx.mpf(0)
        for k in range(n):
            zk = z[k]
            p = ctx.mpc(0)
            for c in reversed(coeffs):
                p = p * zk + c
            if p == 0:
                continue
            dp = ctx.mpc(0)
            for c in reversed(dcoeffs):
                dp = dp * zk + c
            ratio = p / dp if dp != 0 else ctx.mpc(tol)
            s = ctx.fsum(1 / (zk - z[j]) for j in range(n) if j != k and z[j] != zk)
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] = zk - w
            worst = max(worst, abs(w) / max(1, abs(zk)))
        if worst <= tol:
            break
    return z


def _sqrt_upper(q: Fraction) -> Fraction:
    num, den = q.numerator, q.denominator
    root = isqrt(num * den)
    if root * root == num * den:
        return Fraction(root, den)
    return Fraction(root + 1, den)


def _round_candidates(candidates: list[mpmath.mpc], prec: int) -> list[tuple[int, int]] | None:
    """Scale to integers; snap near-real candidates onto the axis and force exact conjugate pairs."""
    scale = 2**prec
    real_axis: list[tuple[int, int]] = []
    upper: list[tuple[int, int]] = []
    lower = 0
    for z in candidates:
        re, im = raw_to_fraction(z.real._mpf_), raw_to_fraction(z.imag._mpf_)
        threshold = max(Fraction(1), abs(re), abs(im)) / 2 ** (prec // 2)
        x = round(re * scale)
        if abs(im) <= threshold:
            real_axis.append((x, 0))
        elif im > 0:
            upper.append((x, round(im * scale)))
        else:
            lower += 1
    if lower != len(upper):
        return None
    return real_axis + upper + [(x, -y) for x, y in upper]


def _certify(f: IntPolynomial, points: list[tuple[int, int]], prec: int) -> list[ComplexBox] | None:
    n = f.degree
    e = prec
    scale = 1 << e
    lead = f.lead
    radii: list[Fraction] = []
    for i, (xi, yi) in enumerate(points):
        # S^n f(Z/S) by homogenized Horner over Z[i]
        pr, pi = lead, 0
        for k in range(n - 1, -1, -1):
            pr, pi = pr * xi - pi * yi, pr * yi + pi * xi
            pr += f.coeffs[k] << (e * (n - k))
        qr, qi = 1, 0
        for j, (xj, yj) in enumerate(points):
            if j == i:
                continue
            dr, di = xi - xj, yi - yj
            if dr == 0 and di == 0:
                return None
            qr, qi = qr * dr - qi * di, qr * di + qi * dr
        w_squared = Fraction(pr * pr + pi * pi, (scale * lead) ** 2 * (qr * qr + qi * qi))
        radii.append(_sqrt_upper(n * n * w_squared))

    boxes = []
    for (x, y), r in zip(points, radii, strict=True):
        cx, cy = Fraction(x, scale), Fraction(y, scale)
        re = RealEnclosure.from_bounds(cx - r, cx + r, prec)
        if y == 0:
            im = RealEnclosure.zero(prec)
        else:
            im = RealEnclosure.from_bounds(cy - r, cy + r, prec)
        boxes.append(ComplexBox(re=re, im=im, center_re=cx, center_im=cy, radius=r, real=y == 0))

    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if not boxes[i].disjoint_from(boxes[j]):
                return None
    return sorted(boxes, key=ComplexBox.sort_key)


def _linear_root(f: IntPolynomial, prec: int) -> list[ComplexBox]:
    root = Fraction(-f.coeffs[0], f.coeffs[1])
    return [ComplexBox(RealEnclosure.exact(root, prec), RealEnclosure.zero(prec), root, Fraction(0), Fraction(0), real=True)]


@trace_sync_operation("roots.isolate")
def isolate_roots(f: IntPolynomial, target_width: float = 1e-12, precision: int = 128, precision_cap: int = 4096) -> list[ComplexBox]:
    """Disjoint certified boxes, one per root of f, sorted by center (real part, then imaginary part).

    Precision doubles until every box is narrower than `target_width`. If the
    cap is reached with certified but wider boxes, those are returned; if no
    certificate exists at the cap, PrecisionCapError is raised.
    """
    if f.degree < 1:
        raise ConstantPolynomialError()
    if not squarefree_check(f):
        raise NotSquarefreeError()
    if f.degree == 1:
        return _linear_root(f, precision)

    real_count = int(dup_count_real_roots(f.to_dup(), ZZ))
    prec = precision
    best: list[ComplexBox] | None = None
    while True:
        points = _round_candidates(_aberth(f, prec), prec)
        boxes = _certify(f, points, prec) if points is not None else None
        if boxes is not None and sum(box.real for box in boxes) != real_count:
            logger.warning(f"isolate_roots({f}): {sum(box.real for box in boxes)} real boxes, Sturm count {real_count}")
            boxes = None
        if boxes is not None:
            best = boxes
            if all(box.width() <= target_width for box in boxes):
                return boxes
        if prec >= precision_cap:
            break
        next_prec = min(2 * prec, precision_cap)
        logger.debug(f"isolate_roots({f}): escalating precision {prec} -> {next_prec}")
        get_event_logger().log_event(EventType.PRECISION_ESCALATED, {"operation": "isolate_roots", "from": prec, "to": next_prec})
        prec = next_prec

    if best is None:
        raise PrecisionCapError("isolate_roots", precision_cap)
    logger.warning(f"isolate_roots({f}): width target {target_width} not met at precision cap {precision_cap}")
    return best


def abs_squared(box: ComplexBox) -> RealEnclosure:
    return box.re.square() + box.im.square()


def log_plus_abs(box: ComplexBox) -> RealEnclosure:
    """Enclosure of log max(1, |z|), never below zero."""
    prec = box.prec
    modulus_sq = abs_squared(box)
    one = RealEnclosure.exact(1, prec)
    if modulus_sq.upper() <= 1:
        return RealEnclosure.zero(prec)
    value = iv_log(iv_max(one, modulus_sq)) * Fraction(1, 2)
    if value.lower() < 0:
        return RealEnclosure(RealEnclosure.zero(prec).lo, value.hi, prec)
    return value


def log_abs(box: ComplexBox) -> RealEnclosure:
    return iv_log(abs_squared(box)) * Fraction(1, 2)


# -- rectangle arithmetic used to evaluate polynomials on root boxes ---------


def rect_of(box: ComplexBox) -> Rect:
    return (box.re, box.im)


def rect_add(a: Rect, b: Rect) -> Rect:
    return (a[0] + b[0], a[1] + b[1])


def rect_mul(a: Rect, b: Rect) -> Rect:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def rect_pow(a: Rect, k: int) -> Rect:
    prec = a[0].prec
    result: Rect = (RealEnclosure.exact(1, prec), RealEnclosure.zero(prec))
    base = a
    while k:
        if k & 1:
            result = rect_mul(result, base)
        k >>= 1
        if k:
            base = rect_mul(base, base)
    return result


def rect_eval(poly: tuple[Fraction, ...], z: Rect) -> Rect:
    prec = z[0].prec
    acc: Rect = (RealEnclosure.zero(prec), RealEnclosure.zero(prec))
    for c in reversed(poly):
        acc = rect_mul(acc, z)
        acc = (acc[0] + RealEnclosure.exact(c, prec), acc[1])
    return acc


def rect_meets(a: Rect, box: ComplexBox) -> bool:
    return a[0].intersect(box.re) is not None and a[1].intersect(box.im) is not None
