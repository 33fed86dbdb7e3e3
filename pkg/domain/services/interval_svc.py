"""
Enclosure operations beyond the ring arithmetic on RealEnclosure.

Transcendental endpoints come from mpmath's directed-rounding kernels and are
then pushed outward by a few ulps plus a tiny absolute term, so containment
does not depend on the kernels being correctly rounded.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Literal

from mpmath.libmp import (
    finf,
    fninf,
    fone,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_exp,
    mpf_log,
    mpf_pi,
    mpf_shift,
    mpf_sqrt,
    mpf_sub,
    round_ceiling,
    round_floor,
)
from mpmath.libmp.libmpi import mpi_pow_int

from domain.errors import EnclosureDomainError
from domain.models.enclosure import DEFAULT_PRECISION, Ordering, RawFloat, RealEnclosure

ArithOp = Literal["add", "sub", "mul", "div", "neg", "abs", "max", "min"]


def _slack(value: RawFloat, prec: int) -> RawFloat:
    return mpf_add(mpf_shift(mpf_abs(value), 2 - prec), mpf_shift(fone, -2 * prec), prec, round_ceiling)


def _down(value: RawFloat, prec: int) -> RawFloat:
    if value in (finf, fninf):
        return value
    return mpf_sub(value, _slack(value, prec), prec, round_floor)


def _up(value: RawFloat, prec: int) -> RawFloat:
    if value in (finf, fninf):
        return value
    return mpf_add(value, _slack(value, prec), prec, round_ceiling)


def _max_raw(a: RawFloat, b: RawFloat) -> RawFloat:
    return a if mpf_cmp(a, b) >= 0 else b


def _min_raw(a: RawFloat, b: RawFloat) -> RawFloat:
    return a if mpf_cmp(a, b) <= 0 else b


def iv_max(x: RealEnclosure, y: RealEnclosure) -> RealEnclosure:
    return RealEnclosure(_max_raw(x.lo, y.lo), _max_raw(x.hi, y.hi), max(x.prec, y.prec))


def iv_min(x: RealEnclosure, y: RealEnclosure) -> RealEnclosure:
    return RealEnclosure(_min_raw(x.lo, y.lo), _min_raw(x.hi, y.hi), max(x.prec, y.prec))


def iv_arith(op: ArithOp, x: RealEnclosure, y: RealEnclosure | None = None) -> RealEnclosure:
    if op == "neg":
        return -x
    if op == "abs":
        return abs(x)
    if y is None:
        raise ValueError(f"operation {op} needs two operands")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "max":
        return iv_max(x, y)
    if op == "min":
        return iv_min(x, y)
    raise ValueError(f"unknown operation {op}")


def iv_log(x: RealEnclosure) -> RealEnclosure:
    if mpf_cmp(x.lo, fzero) <= 0:
        raise EnclosureDomainError(f"log of enclosure with lo <= 0: {x}")
    prec = x.prec
    lo = fzero if x.lo == fone else _down(mpf_log(x.lo, prec, round_floor), prec)
    hi = fzero if x.hi == fone else _up(mpf_log(x.hi, prec, round_ceiling), prec)
    return RealEnclosure(lo, hi, prec)


def iv_exp(x: RealEnclosure) -> RealEnclosure:
    prec = x.prec
    lo = fone if x.lo == fzero else _down(mpf_exp(x.lo, prec, round_floor), prec)
    hi = fone if x.hi == fzero else _up(mpf_exp(x.hi, prec, round_ceiling), prec)
    if mpf_cmp(lo, fzero) < 0:
        lo = fzero
    return RealEnclosure(lo, hi, prec)


def iv_sqrt(x: RealEnclosure) -> RealEnclosure:
    if mpf_cmp(x.lo, fzero) < 0:
        raise EnclosureDomainError(f"sqrt of enclosure with lo < 0: {x}")
    prec = x.prec
    return RealEnclosure(mpf_sqrt(x.lo, prec, round_floor), mpf_sqrt(x.hi, prec, round_ceiling), prec)


def iv_pow(x: RealEnclosure, exponent: Fraction | int) -> RealEnclosure:
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        n = exponent.numerator
        if n == 0:
            return RealEnclosure.exact(1, x.prec)
        lo, hi = mpi_pow_int((x.lo, x.hi), abs(n), x.prec)
        power = RealEnclosure(lo, hi, x.prec)
        return power if n > 0 else 1 / power
    if mpf_cmp(x.lo, fzero) <= 0:
        raise EnclosureDomainError(f"fractional power of enclosure with lo <= 0: {x}")
    return iv_exp(iv_log(x) * RealEnclosure.exact(exponent, x.prec))


def iv_compare(x: RealEnclosure, y: RealEnclosure) -> Ordering:
    if mpf_cmp(x.hi, y.lo) < 0:
        return Ordering.LESS
    if mpf_cmp(x.lo, y.hi) > 0:
        return Ordering.GREATER
    return Ordering.OVERLAP


def iv_pi(prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    return RealEnclosure(_down(mpf_pi(prec, round_floor), prec), _up(mpf_pi(prec, round_ceiling), prec), prec)


def iv_log_of(value: Fraction | int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    return iv_log(RealEnclosure.exact(value, prec))


def iv_loglog_of(value: Fraction | int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
    return iv_log(iv_log_of(value, prec))


def iv_refine(previous: RealEnclosure | None, current: RealEnclosure) -> RealEnclosure:
    """Intersect a fresh enclosure with an earlier one of the same value, so refinement never widens."""
    if previous is None:
        return current
    merged = previous.intersect(current)
    if merged is None:
        raise EnclosureDomainError(f"disjoint enclosures of the same value: {previous} and {current}")
    return merged
