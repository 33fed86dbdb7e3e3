"""
Galois and multiplicative-rank certificates.

Numeric searches (lattice reduction on high precision embeddings) only propose
candidates. Every positive answer is re-checked in exact arithmetic inside
Q[x]/(f) before it is returned; negative answers are one-sided.
"""
from __future__ import annotations

from fractions import Fraction
import logging
from functools import reduce
from math import gcd, lcm

import mpmath

from adapters.telemetry.events import EventType, get_event_logger
from adapters.telemetry.tracing import trace_sync_operation
from domain.errors import MissingGaloisWitnessError, PrecisionCapError
from domain.models.enclosure import ComplexBox
from domain.models.galois import (
    CertifiedGalois,
    ConjugateExpression,
    GaloisVerdict,
    NoWitness,
    RankEstimate,
    Relation,
    RelationSearchResult,
)
from domain.models.polynomial import FieldElement, IntPolynomial, QPoly
from domain.services.exact_svc import compose_mod, cyclotomic_test, primitive_part, totient
from domain.services.lattice_svc import DEFAULT_DELTA, exact_rank, lll_reduce
from domain.services.roots_svc import isolate_roots, rect_eval, rect_meets, rect_of, rect_pow

logger = logging.getLogger(__name__)

GUARD_BITS = 16


def _order_candidates(d: int) -> list[int]:
    """Every n <= 2d^2 that can be the order of a root of unity of degree dividing d."""
    return [n for n in range(1, 2 * d * d + 1) if d % totient(n) == 0]


def unit_order(g: FieldElement, d: int) -> int | None:
    """Smallest n <= 2d^2 with g^n = 1 in Q[x]/(f), or None (then g is not a root of unity).

    The order must divide L = lcm of all admissible n, so one power decides
    torsion and prime stripping of L finds the exact order.
    """
    if g.is_zero:
        return None
    exponent = reduce(lcm, _order_candidates(d), 1)
    if not (g**exponent).is_one:
        return None
    order = exponent
    for prime in _prime_factors(exponent):
        while order % prime == 0 and (g ** (order // prime)).is_one:
            order //= prime
    return order


def _prime_factors(n: int) -> list[int]:
    factors = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            factors.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        factors.append(n)
    return factors


# -- numeric embeddings -------------------------------------------------------


def _context(prec: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec + GUARD_BITS
    return ctx


def _refine(ctx: mpmath.MPContext, f: IntPolynomial, box: ComplexBox, prec: int) -> mpmath.mpc:
    """Newton-polish the box center to the working precision of ctx."""
    z = ctx.mpc(
        ctx.mpf(box.center_re.numerator) / box.center_re.denominator,
        ctx.mpf(box.center_im.numerator) / box.center_im.denominator,
    )
    coeffs = [ctx.mpf(c) for c in f.coeffs]
    for _ in range(max(4, prec.bit_length() + 2)):
        p = ctx.mpc(0)
        dp = ctx.mpc(0)
        for c in reversed(coeffs):
            dp = dp * z + p
            p = p * z + c
        if p == 0 or dp == 0:
            break
        z = z - p / dp
    if box.real:
        z = ctx.mpc(z.real, 0)
    return z


def _identity(f: IntPolynomial, index: int) -> ConjugateExpression:
    return ConjugateExpression(index=index, p=FieldElement.x(f).rep, certified=True)


def _numerically_maps(p: QPoly, base: ComplexBox, target: ComplexBox, others: list[ComplexBox]) -> bool:
    image = rect_eval(p, rect_of(base))
    if not rect_meets(image, target):
        return False
    return not any(rect_meets(image, box) for box in others if box is not target)


def _within_height(p: QPoly, height_bound: int) -> bool:
    return all(abs(c.numerator) <= height_bound and c.denominator <= height_bound for c in p)


def _cyclotomic_expression(f: IntPolynomial, order: int, base: ComplexBox, target: ComplexBox, others: list[ComplexBox], index: int) -> ConjugateExpression | None:
    x = FieldElement.x(f)
    base_rect = rect_of(base)
    for k in range(1, order + 1):
        if gcd(k, order) != 1:
            continue
        image = rect_pow(base_rect, k)
        if not rect_meets(image, target) or any(rect_meets(image, box) for box in others if box is not target):
            continue
        rep = (x**k).rep
        if not compose_mod(f, rep):
            return ConjugateExpression(index=index, p=rep, certified=True)
    return None


def _lattice_candidates(f: IntPolynomial, base: ComplexBox, target: ComplexBox, prec: int) -> list[QPoly]:
    d = f.degree
    ctx = _context(prec)
    alpha = _refine(ctx, f, base, prec)
    beta = _refine(ctx, f, target, prec)
    scale = ctx.ldexp(1, prec - 32)

    rows: list[list[int]] = []
    power = ctx.mpc(1)
    for k in range(d):
        unit = [0] * (d + 1)
        unit[k] = 1
        rows.append(unit + [int(ctx.nint(scale * power.real)), int(ctx.nint(scale * power.imag))])
        power = power * alpha
    unit = [0] * (d + 1)
    unit[d] = 1
    rows.append(unit + [int(ctx.nint(-scale * beta.real)), int(ctx.nint(-scale * beta.imag))])

    candidates = []
    for row in lll_reduce(rows, DEFAULT_DELTA).rows:
        denominator = row[d]
        if denominator == 0:
            continue
        candidates.append(tuple(Fraction(row[k], denominator) for k in range(d)))
    return candidates


def express_conjugate(
    f: IntPolynomial,
    base_box: ComplexBox,
    target_box: ComplexBox,
    height_bound: int = 10**6,
    precision: int = 256,
    precision_cap: int = 4096,
    all_boxes: list[ComplexBox] | None = None,
    index: int = 0,
) -> ConjugateExpression | None:
    """Find p in Q[x], deg p < d, with p(base root) = target root, certified exactly.

    None means no expression with numerators and denominators bounded by
    `height_bound` turned up at the precision used. It is not a proof that
    none exists.
    """
    others = list(all_boxes) if all_boxes is not None else [base_box, target_box]
    if target_box == base_box:
        return _identity(f, index)

    d = f.degree
    if d == 2:
        _, a1, a2 = f.coeffs
        p = (Fraction(-a1, a2), Fraction(-1))
        if _numerically_maps(p, base_box, target_box, others) and not compose_mod(f, p):
            return ConjugateExpression(index=index, p=p, certified=True)
        return None

    order = cyclotomic_test(f)
    if order is not None:
        found = _cyclotomic_expression(f, order, base_box, target_box, others, index)
        if found is not None:
            return found

    prec = precision
    while True:
        needs_precision = False
        for p in _lattice_candidates(f, base_box, target_box, prec):
            if not _within_height(p, height_bound) or not _numerically_maps(p, base_box, target_box, others):
                continue
            if not compose_mod(f, p):
                return ConjugateExpression(index=index, p=p, certified=True)
            needs_precision = True
        if not needs_precision:
            return None
        if prec >= precision_cap:
            raise PrecisionCapError("express_conjugate", precision_cap)
        next_prec = min(2 * prec, precision_cap)
        logger.debug(f"express_conjugate({f}, {index}): candidate failed exact check, precision {prec} -> {next_prec}")
        get_event_logger().log_event(EventType.PRECISION_ESCALATED, {"operation": "express_conjugate", "from": prec, "to": next_prec})
        prec = next_prec


@trace_sync_operation("galois.is_galois")
def is_galois(f: IntPolynomial, height_bound: int = 10**6, embedding_precision: int = 256, precision_cap: int = 4096) -> GaloisVerdict:
    """CertifiedGalois when every root is a certified polynomial in the first one; NoWitness otherwise."""
    _, f = primitive_part(f)
    if f.degree == 1:
        return CertifiedGalois(expressions=(_identity(f, 0),), precision=embedding_precision)

    boxes = isolate_roots(f, target_width=2.0 ** (-(embedding_precision // 2)), precision=embedding_precision, precision_cap=precision_cap)
    base = boxes[0]
    expressions = []
    for i, box in enumerate(boxes):
        expr = express_conjugate(f, base, box, height_bound, embedding_precision, precision_cap, all_boxes=boxes, index=i)
        if expr is None:
            logger.info(f"is_galois({f}): no expression for conjugate {i} within H={height_bound}")
            return NoWitness(height_bound=height_bound, precision=embedding_precision, failed_index=i)
        expressions.append(expr)
    return CertifiedGalois(expressions=tuple(expressions), precision=embedding_precision)


def verify_expression(f: IntPolynomial, expression: ConjugateExpression) -> bool:
    """Independent re-check of f(p(x)) = 0 mod f."""
    return not compose_mod(f, expression.p)


# -- multiplicative relations -------------------------------------------------


def _scaled_log_embeddings(f: IntPolynomial, expressions: tuple[ConjugateExpression, ...], boxes: list[ComplexBox], prec: int) -> list[list[int]]:
    """Row i holds round(2^(prec/2) * log |p_i(alpha_j)|) over the embeddings j."""
    ctx = _context(prec)
    scale = ctx.ldexp(1, prec // 2)
    roots = [_refine(ctx, f, box, prec) for box in boxes]
    rows = []
    for expr in expressions:
        row = []
        for z in roots:
            value = ctx.mpc(0)
            for c in reversed(expr.p):
                value = value * z + ctx.mpf(c.numerator) / c.denominator
            row.append(int(ctx.nint(scale * ctx.log(abs(value)))) if value != 0 else 0)
        rows.append(row)
    return rows


def _normalize_sign(vector: tuple[int, ...]) -> tuple[int, ...]:
    for c in vector:
        if c:
            return vector if c > 0 else tuple(-x for x in vector)
    return vector


def _relation_product(elements: list[FieldElement], exponents: tuple[int, ...]) -> FieldElement:
    product = FieldElement.const(elements[0].modulus, 1)
    for element, e in zip(elements, exponents, strict=True):
        if e:
            product = product * element**e
    return product


@trace_sync_operation("galois.find_relations")
def find_relations(
    f: IntPolynomial,
    expressions: tuple[ConjugateExpression, ...],
    exponent_bound: int = 20,
    precision: int = 256,
    max_coefficient_bits: int = 65536,
    boxes: list[ComplexBox] | None = None,
) -> RelationSearchResult:
    """Torsion relations prod alpha_i^{e_i} = root of unity with |e_i| <= exponent_bound, each certified exactly."""
    _, f = primitive_part(f)
    d = f.degree
    if boxes is None:
        boxes = isolate_roots(f, target_width=2.0 ** (-(precision // 2)), precision=precision)
    elements = [expr.as_element(f) for expr in expressions]

    logs = _scaled_log_embeddings(f, expressions, boxes, precision)
    rows = []
    for i in range(d):
        unit = [0] * d
        unit[i] = 1
        rows.append(unit + logs[i])
    reduced = lll_reduce(rows, DEFAULT_DELTA)

    slack = d * (exponent_bound + 1)
    candidates = set()
    for row in reduced.rows:
        exponents, numeric = tuple(row[:d]), row[d:]
        if all(abs(v) <= slack for v in numeric) and all(abs(e) <= exponent_bound for e in exponents) and any(exponents):
            candidates.add(_normalize_sign(exponents))
    ordered = sorted(candidates, key=lambda e: (sum(x * x for x in e), e))

    relations = []
    partial = False
    for exponents in ordered:
        estimate = sum(abs(e) * element.bit_size() for e, element in zip(exponents, elements, strict=True))
        product = _relation_product(elements, exponents) if estimate <= 4 * max_coefficient_bits else None
        if product is None or product.bit_size() > max_coefficient_bits:
            logger.warning(f"find_relations({f}): product for {exponents} exceeds {max_coefficient_bits} bits, skipped")
            partial = True
            continue
        order = unit_order(product, d)
        if order is not None:
            relations.append(Relation(exponents=exponents, order=order))
    return RelationSearchResult(relations=tuple(relations), numeric_candidates=tuple(ordered), partial=partial)


def _independent_subset(relations: tuple[Relation, ...]) -> list[Relation]:
    basis: list[Relation] = []
    for relation in relations:
        if exact_rank([r.exponents for r in basis] + [relation.exponents]) > len(basis):
            basis.append(relation)
    return basis


@trace_sync_operation("galois.mult_rank")
def mult_rank(
    f: IntPolynomial,
    exponent_bound: int = 20,
    galois: GaloisVerdict | None = None,
    precision: int = 256,
    max_coefficient_bits: int = 65536,
) -> RankEstimate:
    """Rank of the group generated by the conjugates, modulo torsion.

    rank_upper_certified = d - rank(certified relations) holds unconditionally;
    rank_heuristic assumes every relation has exponents below the search bound.
    """
    _, f = primitive_part(f)
    d = f.degree
    if f.coeffs == (0, 1):
        return RankEstimate(d, (), 0, 0, exponent_bound, notes=("alpha = 0 lies outside the multiplicative group",))
    if galois is None:
        galois = is_galois(f, embedding_precision=precision)
    if not isinstance(galois, CertifiedGalois):
        raise MissingGaloisWitnessError()

    result = find_relations(f, galois.expressions, exponent_bound, precision, max_coefficient_bits)
    basis = _independent_subset(result.relations)
    upper = d - len(basis)

    vectors = [r.exponents for r in basis] + list(result.numeric_candidates)
    heuristic = d - (exact_rank(vectors) if vectors else 0)
    if cyclotomic_test(f) is None:
        heuristic = min(upper, max(1, heuristic))
    else:
        heuristic = min(upper, heuristic)

    notes = ("relation search hit the coefficient budget",) if result.partial else ()
    return RankEstimate(
        num_conjugates=d,
        relation_basis=tuple(basis),
        rank_upper_certified=upper,
        rank_heuristic=heuristic,
        search_bound=exponent_bound,
        partial=result.partial,
        notes=notes,
    )


def verify_relation(f: IntPolynomial, expressions: tuple[ConjugateExpression, ...], relation: Relation) -> bool:
    """Recompute the relation product exactly and confirm it has the recorded order."""
    elements = [expr.as_element(f) for expr in expressions]
    product = _relation_product(elements, relation.exponents)
    return unit_order(product, f.degree) == relation.order
