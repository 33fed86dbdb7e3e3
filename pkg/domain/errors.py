"""
Exception hierarchy for heightcert.

Library code raises these; the CLI maps them to exit codes and the corpus
runner turns them into row statuses.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from domain.models.polynomial import IntPolynomial


class HeightCertError(Exception):
    """Base class for all heightcert errors."""


class ZeroPolynomialError(HeightCertError, ValueError):
    def __init__(self, message: str = "zero polynomial"):
        super().__init__(message)


class ConstantPolynomialError(HeightCertError, ValueError):
    def __init__(self, message: str = "constant polynomial"):
        super().__init__(message)


class BadPrimeError(HeightCertError, ValueError):
    """Prime divides the leading coefficient, or the reduction is not squarefree."""

    def __init__(self, prime: int):
        self.prime = prime
        super().__init__(f"bad prime {prime}")


class ModulusMismatchError(HeightCertError, ValueError):
    def __init__(self, message: str = "field elements have different moduli"):
        super().__init__(message)


class NonInvertibleElementError(HeightCertError, ArithmeticError):
    """Raised when an element of Q[x]/(f) has no inverse; `factor` divides f nontrivially."""

    def __init__(self, factor: IntPolynomial):
        self.factor = factor
        super().__init__(f"element not invertible, modulus has factor {factor}")


class EnclosureDomainError(HeightCertError, ValueError):
    pass


class EnclosureDivisionError(HeightCertError, ZeroDivisionError):
    def __init__(self, message: str = "division by an enclosure containing 0"):
        super().__init__(message)


class NotSquarefreeError(HeightCertError, ValueError):
    def __init__(self, message: str = "polynomial is not squarefree"):
        super().__init__(message)


class DependentRowsError(HeightCertError, ValueError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"lattice rows are linearly dependent (row {row})")


class PrecisionCapError(HeightCertError):
    """Certification did not succeed below the precision cap; the result is indeterminate."""

    def __init__(self, operation: str, precision: int):
        self.operation = operation
        self.precision = precision
        super().__init__(f"{operation}: indeterminate at precision cap {precision} bits")


class MissingGaloisWitnessError(HeightCertError):
    def __init__(self, message: str = "no certified conjugate expressions available"):
        super().__init__(message)


class PolynomialParseError(HeightCertError, ValueError):
    pass


class CorpusParseError(HeightCertError, ValueError):
    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")
