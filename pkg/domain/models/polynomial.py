"""
Exact polynomial carriers.

`IntPolynomial` holds a minimal polynomial over Z, `FieldElement` an element of
Q[x]/(f). Rational polynomials are plain tuples of Fractions in ascending
degree order; the `qp_*` helpers convert them to sympy's dense representation
(descending lists over QQ) and back.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from sympy.polys.densearith import dup_add, dup_div, dup_mul, dup_mul_ground, dup_sub
from sympy.polys.densetools import dup_clear_denoms, dup_diff, dup_eval, dup_monic, dup_primitive
from sympy.polys.domains import QQ, ZZ
from sympy.polys.euclidtools import dup_gcd, dup_gcdex

from domain.errors import ModulusMismatchError, NonInvertibleElementError, ZeroPolynomialError

QPoly = tuple[Fraction, ...]


def _qq(c: Fraction | int) -> Any:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _fraction(c: Any) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def to_dup(p: QPoly) -> list[Any]:
    """Dense descending list over QQ."""
    return [_qq(c) for c in reversed(qp_trim(p))]


def from_dup(f: Sequence[Any]) -> QPoly:
    return qp_trim(_fraction(c) for c in reversed(f))


def qp_trim(p: Iterable[Fraction | int]) -> QPoly:
    coeffs = [Fraction(c) for c in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def qp_add(p: QPoly, q: QPoly) -> QPoly:
    return from_dup(dup_add(to_dup(p), to_dup(q), QQ))


def qp_neg(p: QPoly) -> QPoly:
    return tuple(-c for c in p)


def qp_sub(p: QPoly, q: QPoly) -> QPoly:
    return from_dup(dup_sub(to_dup(p), to_dup(q), QQ))


def qp_scale(p: QPoly, c: Fraction | int) -> QPoly:
    return from_dup(dup_mul_ground(to_dup(p), _qq(c), QQ))


def qp_mul(p: QPoly, q: QPoly) -> QPoly:
    return from_dup(dup_mul(to_dup(p), to_dup(q), QQ))


def qp_divmod(p: QPoly, q: QPoly) -> tuple[QPoly, QPoly]:
    if not qp_trim(q):
        raise ZeroDivisionError("polynomial division by zero")
    quot, rem = dup_div(to_dup(p), to_dup(q), QQ)
    return from_dup(quot), from_dup(rem)


def qp_monic(p: QPoly) -> QPoly:
    return from_dup(dup_monic(to_dup(p), QQ)) if p else p


def qp_gcd(p: QPoly, q: QPoly) -> QPoly:
    return qp_monic(from_dup(dup_gcd(to_dup(p), to_dup(q), QQ)))


def qp_xgcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    if not qp_trim(a) and not qp_trim(b):
        return (), (), ()
    if not qp_trim(b):
        inv = 1 / qp_trim(a)[-1]
        return qp_scale(a, inv), (inv,), ()
    s, t, g = (from_dup(part) for part in dup_gcdex(to_dup(a), to_dup(b), QQ))
    inv = 1 / g[-1]
    return qp_scale(g, inv), qp_scale(s, inv), qp_scale(t, inv)


def qp_derivative(p: QPoly) -> QPoly:
    return from_dup(dup_diff(to_dup(p), 1, QQ))


def qp_eval(p: QPoly, x: Fraction | int) -> Fraction:
    return _fraction(dup_eval(to_dup(p), _qq(x), QQ))


def qp_bit_size(p: QPoly) -> int:
    return max((c.numerator.bit_length() + c.denominator.bit_length() for c in p), default=0)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree order, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    @classmethod
    def of(cls, *coeffs: int) -> IntPolynomial:
        return cls(tuple(coeffs))

    @classmethod
    def from_dup(cls, f: Sequence[Any]) -> IntPolynomial:
        """From a dense descending list over ZZ."""
        return cls(tuple(int(c) for c in reversed(f)))

    def to_dup(self) -> list[Any]:
        """Dense descending list over ZZ."""
        return [ZZ(c) for c in reversed(self.coeffs)]

    @classmethod
    def from_rational(cls, p: Sequence[Fraction]) -> IntPolynomial:
        """Primitive integer multiple of a rational polynomial (positive leading coefficient)."""
        p = qp_trim(p)
        if not p:
            raise ZeroPolynomialError()
        _, ints = dup_clear_denoms(to_dup(p), QQ, ZZ, convert=True)
        _, prim = dup_primitive(ints, ZZ)
        poly = cls.from_dup(prim)
        return poly if poly.lead > 0 else cls(tuple(-c for c in poly.coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomialError()
        return self.coeffs[-1]

    def to_rational(self) -> QPoly:
        return tuple(Fraction(c) for c in self.coeffs)

    def __call__(self, x: int | Fraction) -> int | Fraction:
        acc: int | Fraction = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * self.coeffs[i] for i in range(1, len(self.coeffs))))

    def reversed(self) -> IntPolynomial:
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = f"{mag}" if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


@dataclass(frozen=True)
class FieldElement:
    """Element of Q[x]/(f), always stored reduced (degree < deg f)."""

    modulus: IntPolynomial
    rep: QPoly

    def __post_init__(self) -> None:
        if self.modulus.degree < 1:
            raise ValueError("modulus must be nonconstant")
        rep = qp_trim(self.rep)
        if len(rep) > self.modulus.degree:
            rep = qp_divmod(rep, self.modulus.to_rational())[1]
        object.__setattr__(self, "rep", rep)

    @classmethod
    def x(cls, modulus: IntPolynomial) -> FieldElement:
        return cls(modulus, (Fraction(0), Fraction(1)))

    @classmethod
    def const(cls, modulus: IntPolynomial, c: int | Fraction) -> FieldElement:
        return cls(modulus, (Fraction(c),))

    @property
    def is_zero(self) -> bool:
        return not self.rep

    @property
    def is_one(self) -> bool:
        return self.rep == (Fraction(1),)

    def _check(self, other: FieldElement) -> None:
        if other.modulus != self.modulus:
            raise ModulusMismatchError()

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.modulus, qp_add(self.rep, other.rep))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.modulus, qp_sub(self.rep, other.rep))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.modulus, qp_neg(self.rep))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.modulus, qp_mul(self.rep, other.rep))

    def scale(self, c: int | Fraction) -> FieldElement:
        return FieldElement(self.modulus, qp_scale(self.rep, c))

    def inverse(self) -> FieldElement:
        g, s, _ = qp_xgcd(self.rep, self.modulus.to_rational())
        if len(g) != 1:
            # g is a nontrivial common factor of rep and f
            raise NonInvertibleElementError(IntPolynomial.from_rational(g or self.modulus.to_rational()))
        return FieldElement(self.modulus, s)

    def __pow__(self, exponent: int) -> FieldElement:
        base = self.inverse() if exponent < 0 else self
        n = abs(exponent)
        result = FieldElement.const(self.modulus, 1)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def evaluate(self, poly: Sequence[Fraction | int]) -> FieldElement:
        """poly(self) computed by Horner's rule inside Q[x]/(f)."""
        acc = FieldElement(self.modulus, ())
        for c in reversed(tuple(poly)):
            acc = acc * self + FieldElement.const(self.modulus, c)
        return acc

    def bit_size(self) -> int:
        return qp_bit_size(self.rep)

    def __str__(self) -> str:
        if not self.rep:
            return "0"
        parts = []
        for k, c in enumerate(self.rep):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


class SieveVerdict(str, Enum):
    CERTIFIED = "certified"
    UNKNOWN = "unknown"


class IrreducibilityStatus(str, Enum):
    """Outcome of the irreducibility checks run before any certificate is built."""

    CERTIFIED = "certified"
    ASSUMED = "assumed"  # sieve inconclusive, no reducibility witness found
    REDUCIBLE = "reducible"
