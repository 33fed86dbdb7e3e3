"""
Integral LLL reduction.

Reduction runs on sympy's `DomainMatrix` over ZZ with an exact rational Lovasz
parameter, so the output is deterministic and needs no floating point. The
Gram-Schmidt check below is independent of the reducer and is what tests and
callers use to confirm a reduced basis.
"""
from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from sympy import Matrix
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from domain.errors import DependentRowsError
from domain.models.galois import LatticeBasis

DEFAULT_DELTA = Fraction(99, 100)


def _domain_matrix(rows: Sequence[Sequence[int]]) -> DomainMatrix:
    width = len(rows[0]) if rows else 0
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), width), ZZ)


def _first_dependent_row(rows: Sequence[Sequence[int]]) -> int | None:
    if exact_rank(rows) == len(rows):
        return None
    return next(i for i in range(len(rows)) if exact_rank(rows[: i + 1]) <= i)


def lll_reduce(basis: LatticeBasis | Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> LatticeBasis:
    """LLL-reduce the rows of `basis` with Lovasz parameter delta in (1/4, 1)."""
    if not isinstance(basis, LatticeBasis):
        basis = LatticeBasis.of(basis)
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    if basis.rank == 0:
        return basis

    rows = [list(row) for row in basis.rows]
    dependent = _first_dependent_row(rows)
    if dependent is not None:
        raise DependentRowsError(dependent)
    if basis.rank == 1:
        return basis

    reduced = _domain_matrix(rows).lll(delta=QQ(delta.numerator, delta.denominator))
    return LatticeBasis.of([[int(x) for x in row] for row in reduced.to_Matrix().tolist()])


def gram_schmidt(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Exact Gram-Schmidt vectors b*_i and coefficients mu_{i,j}."""
    star: list[list[Fraction]] = []
    mu: list[list[Fraction]] = []
    for i, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        mu_row = []
        for j in range(i):
            norm = sum(x * x for x in star[j])
            coeff = sum(Fraction(a) * c for a, c in zip(row, star[j], strict=True)) / norm if norm else Fraction(0)
            mu_row.append(coeff)
            v = [x - coeff * y for x, y in zip(v, star[j], strict=True)]
        star.append(v)
        mu.append(mu_row)
    return star, mu


def is_lll_reduced(basis: LatticeBasis, delta: Fraction = DEFAULT_DELTA) -> bool:
    star, mu = gram_schmidt(basis.rows)
    norms = [sum(x * x for x in v) for v in star]
    for i in range(len(star)):
        if any(abs(m) > Fraction(1, 2) for m in mu[i]):
            return False
        if i > 0 and norms[i] < (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            return False
    return True


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q."""
    if not rows or not rows[0]:
        return 0
    return int(_domain_matrix(rows).convert_to(QQ).rank())


def same_lattice(a: LatticeBasis, b: LatticeBasis) -> bool:
    """True when each basis expresses the other with integer coefficients."""
    return _contains(a, b) and _contains(b, a)


def _contains(outer: LatticeBasis, inner: LatticeBasis) -> bool:
    if not outer.rows:
        return not inner.rows
    system = Matrix([list(row) for row in outer.rows]).T
    for target in inner.rows:
        try:
            solution, params = system.gauss_jordan_solve(Matrix(list(target)))
        except ValueError:
            return False
        solution = solution.subs({p: 0 for p in params})
        if any(not c.is_integer for c in solution):
            return False
    return True
