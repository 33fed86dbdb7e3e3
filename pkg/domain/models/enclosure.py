"""
Certified enclosures.

A `RealEnclosure` is a closed interval [lo, hi] with endpoints stored as raw
mpmath binary floats. Every operation rounds lo toward -inf and hi toward +inf,
so the exact image of the inputs always stays inside. Rounding direction is an
argument of each libmp call; no global context is touched.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from mpmath.libmp import (
    fnan,
    finf,
    fninf,
    fzero,
    from_int,
    from_rational,
    mpf_add,
    mpf_cmp,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_float,
    to_str,
)
from mpmath.libmp.libmpi import mpi_abs, mpi_add, mpi_div, mpi_mul, mpi_neg, mpi_sub

from domain.errors import EnclosureDivisionError

RawFloat = tuple  # mpmath raw mpf tuple (sign, man, exp, bc)

DEFAULT_PRECISION = 128


class Ordering(str, Enum):
    LESS = "less"
    GREATER = "greater"
    OVERLAP = "overlap"


def raw_to_fraction(value: RawFloat) -> Fraction:
    if value in (finf, fninf, fnan):
        raise ValueError("non-finite endpoint has no exact rational value")
    sign, man, exp, _ = value
    magnitude = Fraction(man) * (Fraction(2) ** exp)
    return -magnitude if sign else magnitude


def _raw_from_fraction(value: Fraction | int, prec: int, rnd: str) -> RawFloat:
    value = Fraction(value)
    if value.denominator == 1:
        return from_int(value.numerator, prec, rnd)
    return from_rational(value.numerator, value.denominator, prec, rnd)


@dataclass(frozen=True)
class RealEnclosure:
    lo: RawFloat
    hi: RawFloat
    prec: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if mpf_cmp(self.lo, self.hi) > 0:
            raise ValueError("enclosure requires lo <= hi")

    @classmethod
    def exact(cls, value: Fraction | int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
        return cls(_raw_from_fraction(value, prec, round_floor), _raw_from_fraction(value, prec, round_ceiling), prec)

    @classmethod
    def from_bounds(cls, lo: Fraction | int, hi: Fraction | int, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
        return cls(_raw_from_fraction(lo, prec, round_floor), _raw_from_fraction(hi, prec, round_ceiling), prec)

    @classmethod
    def zero(cls, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
        return cls(fzero, fzero, prec)

    @classmethod
    def entire(cls, prec: int = DEFAULT_PRECISION) -> RealEnclosure:
        return cls(fninf, finf, prec)

    # -- inspection -------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.lo not in (finf, fninf) and self.hi not in (finf, fninf)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def lower(self) -> Fraction:
        return raw_to_fraction(self.lo)

    def upper(self) -> Fraction:
        return raw_to_fraction(self.hi)

    def lower_float(self) -> float:
        """Largest double not above lo."""
        return to_float(self.lo, rnd=round_floor)

    def upper_float(self) -> float:
        return to_float(self.hi, rnd=round_ceiling)

    def mid_float(self) -> float:
        if not self.is_finite:
            return float("nan")
        return float((self.lower() + self.upper()) / 2)

    def width(self) -> float:
        if not self.is_finite:
            return float("inf")
        return to_float(mpf_sub(self.hi, self.lo, self.prec, round_ceiling), rnd=round_ceiling)

    def contains(self, value: Fraction | int) -> bool:
        value = Fraction(value)
        above_lo = self.lo == fninf or (self.lo != finf and self.lower() <= value)
        below_hi = self.hi == finf or (self.hi != fninf and value <= self.upper())
        return above_lo and below_hi

    def contains_enclosure(self, other: RealEnclosure) -> bool:
        return mpf_cmp(self.lo, other.lo) <= 0 and mpf_cmp(other.hi, self.hi) <= 0

    def contains_zero(self) -> bool:
        return mpf_cmp(self.lo, fzero) <= 0 <= mpf_cmp(self.hi, fzero)

    def positive(self) -> bool:
        return mpf_cmp(self.lo, fzero) > 0

    def describe(self, digits: int = 12) -> str:
        """Human readable form; both endpoints printed to `digits` significant digits."""
        return f"[{to_str(self.lo, digits)}, {to_str(self.hi, digits)}]"

    def __str__(self) -> str:
        return self.describe()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: RealEnclosure | Fraction | int) -> RealEnclosure:
        if isinstance(other, RealEnclosure):
            return other
        return RealEnclosure.exact(other, self.prec)

    def _wrap(self, pair: tuple[RawFloat, RawFloat], prec: int) -> RealEnclosure:
        return RealEnclosure(pair[0], pair[1], prec)

    def __add__(self, other: RealEnclosure | Fraction | int) -> RealEnclosure:
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(mpi_add((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    __radd__ = __add__

    def __sub__(self, other: RealEnclosure | Fraction | int) -> RealEnclosure:
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(mpi_sub((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    def __rsub__(self, other: Fraction | int) -> RealEnclosure:
        return self._coerce(other) - self

    def __mul__(self, other: RealEnclosure | Fraction | int) -> RealEnclosure:
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(mpi_mul((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    __rmul__ = __mul__

    def __truediv__(self, other: RealEnclosure | Fraction | int) -> RealEnclosure:
        other = self._coerce(other)
        if other.contains_zero():
            raise EnclosureDivisionError()
        prec = max(self.prec, other.prec)
        return self._wrap(mpi_div((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    def __rtruediv__(self, other: Fraction | int) -> RealEnclosure:
        return self._coerce(other) / self

    def __neg__(self) -> RealEnclosure:
        return self._wrap(mpi_neg((self.lo, self.hi)), self.prec)

    def __abs__(self) -> RealEnclosure:
        return self._wrap(mpi_abs((self.lo, self.hi)), self.prec)

    def square(self) -> RealEnclosure:
        a = abs(self)
        return a * a

    def hull(self, other: RealEnclosure) -> RealEnclosure:
        lo = self.lo if mpf_cmp(self.lo, other.lo) <= 0 else other.lo
        hi = self.hi if mpf_cmp(self.hi, other.hi) >= 0 else other.hi
        return RealEnclosure(lo, hi, max(self.prec, other.prec))

    def intersect(self, other: RealEnclosure) -> RealEnclosure | None:
        lo = self.lo if mpf_cmp(self.lo, other.lo) >= 0 else other.lo
        hi = self.hi if mpf_cmp(self.hi, other.hi) <= 0 else other.hi
        if mpf_cmp(lo, hi) > 0:
            return None
        return RealEnclosure(lo, hi, max(self.prec, other.prec))

    def widened(self, amount: Fraction) -> RealEnclosure:
        """Outward copy, each endpoint moved by at least `amount`."""
        pad = _raw_from_fraction(amount, self.prec, round_ceiling)
        lo = self.lo if self.lo == fninf else mpf_sub(self.lo, pad, self.prec, round_floor)
        hi = self.hi if self.hi == finf else mpf_add(self.hi, pad, self.prec, round_ceiling)
        return RealEnclosure(lo, hi, self.prec)


@dataclass(frozen=True)
class ComplexBox:
    """Rectangle re x im known to contain exactly one root of f.

    `center_re + i*center_im` is the dyadic approximation the certificate was
    computed from and `radius` bounds its distance to the root, so the disk
    around the center also isolates that root. `real` means the root itself
    is certified real.
    """

    re: RealEnclosure
    im: RealEnclosure
    center_re: Fraction
    center_im: Fraction
    radius: Fraction
    real: bool = False

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def width(self) -> float:
        return max(self.re.width(), self.im.width())

    def conjugate(self) -> ComplexBox:
        return ComplexBox(self.re, -self.im, self.center_re, -self.center_im, self.radius, self.real)

    def disjoint_from(self, other: ComplexBox) -> bool:
        """Exact test that the certification disks do not meet."""
        dr = self.center_re - other.center_re
        di = self.center_im - other.center_im
        reach = self.radius + other.radius
        return dr * dr + di * di > reach * reach

    def overlaps(self, other: ComplexBox) -> bool:
        return self.re.intersect(other.re) is not None and self.im.intersect(other.im) is not None

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.center_re, self.center_im)
