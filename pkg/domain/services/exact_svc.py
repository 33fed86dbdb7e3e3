"""
Exact arithmetic over Z, Q, F_p and Q[x]/(f).

Polynomial work is delegated to sympy's dense representation (descending
coefficient lists over ZZ, QQ or GF(p)); everything here is pure and
deterministic, no floating point is used.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import logging
from math import gcd

from sympy import divisors
from sympy import prime as nth_prime
from sympy import totient as sympy_totient
from sympy.polys.densearith import dup_mul
from sympy.polys.densetools import dup_primitive
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_resultant
from sympy.polys.factortools import dup_zz_cyclotomic_poly
from sympy.polys.galoistools import gf_ddf_zassenhaus, gf_degree, gf_from_int_poly, gf_monic, gf_sqf_p
from sympy.polys.sqfreetools import dup_sqf_p, dup_sqf_part

from domain.errors import BadPrimeError, ConstantPolynomialError, ZeroPolynomialError
from domain.models.polynomial import FieldElement, IntPolynomial, IrreducibilityStatus, QPoly, SieveVerdict

logger = logging.getLogger(__name__)

RATIONAL_ROOT_SEARCH_LIMIT = 10**12


def primitive_part(p: IntPolynomial) -> tuple[int, IntPolynomial]:
    """Split p into (content, primitive): content > 0, primitive has content 1 and a positive leading coefficient.

    content * primitive equals p up to sign; for -3x this gives (3, x).
    """
    if p.is_zero:
        raise ZeroPolynomialError()
    content, prim = dup_primitive(p.to_dup(), ZZ)
    primitive = IntPolynomial.from_dup(prim)
    if primitive.lead < 0:
        primitive = IntPolynomial(tuple(-c for c in primitive.coeffs))
    return int(content), primitive


def squarefree_check(p: IntPolynomial) -> bool:
    if p.is_zero:
        raise ZeroPolynomialError()
    if p.degree < 1:
        raise ConstantPolynomialError()
    return bool(dup_sqf_p(p.to_dup(), ZZ))


def modp_factor_degrees(p: IntPolynomial, prime: int) -> list[int]:
    """Degrees of the irreducible factors of p mod prime, sorted ascending (distinct-degree factorization)."""
    if p.is_zero:
        raise ZeroPolynomialError()
    if p.degree < 1:
        raise ConstantPolynomialError()
    if p.lead % prime == 0:
        raise BadPrimeError(prime)
    _, f = gf_monic(gf_from_int_poly([int(c) for c in reversed(p.coeffs)], prime), prime, ZZ)
    if not gf_sqf_p(f, prime, ZZ):
        raise BadPrimeError(prime)

    degrees: list[int] = []
    for factor, k in gf_ddf_zassenhaus(f, prime, ZZ):
        degrees.extend([int(k)] * (gf_degree(factor) // int(k)))
    return sorted(degrees)


@lru_cache(maxsize=8)
def first_primes(count: int) -> tuple[int, ...]:
    return tuple(int(nth_prime(i)) for i in range(1, count + 1))


def _subset_sums(degrees: list[int]) -> int:
    """Bitmask of every subset sum of the multiset."""
    mask = 1
    for k in degrees:
        mask |= mask << k
    return mask


def irreducibility_sieve(p: IntPolynomial, primes: list[int] | tuple[int, ...]) -> SieveVerdict:
    """Certify irreducibility over Q from factor-degree patterns mod several primes.

    A factor of p over Q of degree k would show up mod every good prime as a
    sub-multiset of factor degrees summing to k, so an empty intersection of the
    proper subset sums proves irreducibility. Unknown never means reducible.
    """
    d = p.degree
    if d == 1:
        return SieveVerdict.CERTIFIED
    proper = (1 << d) - 2  # bits 1..d-1
    possible = proper
    usable = 0
    for prime in primes:
        try:
            degrees = modp_factor_degrees(p, prime)
        except BadPrimeError:
            logger.debug(f"Skipping bad prime {prime} for {p}")
            continue
        usable += 1
        possible &= _subset_sums(degrees)
        if not possible:
            return SieveVerdict.CERTIFIED
    if usable == 0:
        logger.warning(f"No usable prime for the irreducibility sieve of {p}")
    return SieveVerdict.UNKNOWN


def resultant(p: IntPolynomial, q: IntPolynomial) -> Fraction:
    """Resultant lead(p)^deg(q) * prod q(root of p), by the subresultant PRS."""
    if p.is_zero or q.is_zero:
        return Fraction(0)
    if q.degree == 0:
        return Fraction(q.coeffs[0]) ** p.degree
    if p.degree == 0:
        return Fraction(p.coeffs[0]) ** q.degree
    return Fraction(int(dup_resultant(p.to_dup(), q.to_dup(), ZZ)))


def elem_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def elem_pow(a: FieldElement, exponent: int) -> FieldElement:
    return a**exponent


def totient(n: int) -> int:
    if n < 1:
        raise ValueError("totient is defined for n >= 1")
    return int(sympy_totient(n))


def _is_one_mod(f: IntPolynomial, n: int) -> bool:
    return (FieldElement.x(f) ** n).is_one


@lru_cache(maxsize=1024)
def _cyclotomic_order(coeffs: tuple[int, ...]) -> int | None:
    f = IntPolynomial(coeffs)
    d = f.degree
    if f.lead != 1 or abs(f.coeffs[0]) != 1:
        return None
    for n in range(1, 2 * d * d + 1):
        if totient(n) == d and _is_one_mod(f, n):
            return n
    return None


def cyclotomic_test(f: IntPolynomial) -> int | None:
    """Smallest n with f | x^n - 1 among n <= 2d^2 and phi(n) = d, else None."""
    if f.degree < 1:
        raise ConstantPolynomialError()
    return _cyclotomic_order(f.coeffs)


@lru_cache(maxsize=256)
def cyclotomic_polynomial(n: int) -> IntPolynomial:
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    return IntPolynomial.from_dup(dup_zz_cyclotomic_poly(n, ZZ))


def rational_root(p: IntPolynomial) -> Fraction | None:
    """A rational root of p, if one exists; None when none exists or the search is too large."""
    if p.degree < 1:
        return None
    if p.coeffs[0] == 0:
        return Fraction(0)
    lead, const = p.lead, p.coeffs[0]
    if abs(lead * const) > RATIONAL_ROOT_SEARCH_LIMIT:
        logger.warning(f"Rational root search skipped for {p}: coefficients too large")
        return None
    for den in divisors(abs(lead)):
        for num in divisors(abs(const)):
            if gcd(num, den) != 1:
                continue
            for candidate in (Fraction(num, den), Fraction(-num, den)):
                if p(candidate) == 0:
                    return candidate
    return None


def is_reciprocal(p: IntPolynomial) -> bool:
    rev = tuple(reversed(p.coeffs))
    return rev == p.coeffs or rev == tuple(-c for c in p.coeffs)


def irreducibility_status(p: IntPolynomial, primes: list[int] | tuple[int, ...] | None = None) -> IrreducibilityStatus:
    if p.degree < 1:
        raise ConstantPolynomialError()
    if p.degree == 1:
        return IrreducibilityStatus.CERTIFIED
    if p.coeffs[0] == 0 or not squarefree_check(p) or rational_root(p) is not None:
        return IrreducibilityStatus.REDUCIBLE
    if irreducibility_sieve(p, primes if primes is not None else first_primes(25)) is SieveVerdict.CERTIFIED:
        return IrreducibilityStatus.CERTIFIED
    return IrreducibilityStatus.ASSUMED


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero:
        raise ZeroPolynomialError()
    _, part = primitive_part(IntPolynomial.from_dup(dup_sqf_part(p.to_dup(), ZZ)))
    return part


def compose_mod(outer: IntPolynomial, inner: QPoly) -> QPoly:
    """outer(inner(x)) reduced mod outer; zero iff inner(x) is a root of outer in Q[x]/(outer)."""
    element = FieldElement(outer, inner)
    return element.evaluate(outer.to_rational()).rep


def polynomial_product(factors: list[IntPolynomial]) -> IntPolynomial:
    acc = [ZZ(1)]
    for f in factors:
        acc = dup_mul(acc, f.to_dup(), ZZ)
    return IntPolynomial.from_dup(acc)
