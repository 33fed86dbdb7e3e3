"""
Tests for integral LLL reduction.
"""
from fractions import Fraction
import random

import pytest

from domain.errors import DependentRowsError
from domain.models.galois import LatticeBasis
from domain.services.lattice_svc import exact_rank, is_lll_reduced, lll_reduce, same_lattice


@pytest.mark.unit
class TestLLLReduce:
    def test_two_dimensional(self):
        reduced = lll_reduce([[2, 0], [1, 1]])
        assert is_lll_reduced(reduced)
        assert sorted(sum(x * x for x in row) for row in reduced.rows) == [2, 2]
        assert same_lattice(reduced, LatticeBasis.of([[2, 0], [1, 1]]))

    def test_three_dimensional(self):
        basis = LatticeBasis.of([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
        reduced = lll_reduce(basis, delta=Fraction(3, 4))
        assert is_lll_reduced(reduced, Fraction(3, 4))
        assert same_lattice(basis, reduced)

    def test_identity_is_fixed(self):
        identity = LatticeBasis.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert lll_reduce(identity) == identity

    def test_single_row(self):
        assert lll_reduce([[3, 4]]).rows == ((3, 4),)

    def test_empty(self):
        assert lll_reduce(LatticeBasis.of([])).rank == 0

    def test_random_bases(self):
        rng = random.Random(31337)
        for _ in range(25):
            n = rng.randint(2, 6)
            rows = [[rng.randint(-1000, 1000) for _ in range(n)] for _ in range(n)]
            if exact_rank(rows) < n:
                continue
            basis = LatticeBasis.of(rows)
            reduced = lll_reduce(basis)
            assert is_lll_reduced(reduced)
            assert same_lattice(basis, reduced)

    def test_deterministic(self):
        rows = [[1, 0, 0, 12345], [0, 1, 0, 54321], [0, 0, 1, 11111]]
        assert lll_reduce(rows) == lll_reduce(rows)

    def test_finds_integer_relation(self):
        # 3*a + 5*b - c = 0 for a = 7, b = 11, c = 76
        scale = 10**6
        rows = [[1, 0, 0, 7 * scale], [0, 1, 0, 11 * scale], [0, 0, 1, 76 * scale]]
        first = lll_reduce(rows).rows[0]
        assert first[3] == 0
        assert first[0] * 7 + first[1] * 11 + first[2] * 76 == 0

    def test_dependent_rows(self):
        with pytest.raises(DependentRowsError):
            lll_reduce([[1, 2], [2, 4]])
        with pytest.raises(DependentRowsError):
            lll_reduce([[0, 0], [1, 1]])

    def test_delta_range(self):
        with pytest.raises(ValueError):
            lll_reduce([[1, 0], [0, 1]], delta=Fraction(1, 5))


@pytest.mark.unit
class TestLatticeHelpers:
    def test_exact_rank(self):
        assert exact_rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2
        assert exact_rank([]) == 0

    def test_same_lattice_detects_index(self):
        assert not same_lattice(LatticeBasis.of([[1, 0], [0, 1]]), LatticeBasis.of([[2, 0], [0, 1]]))

    def test_is_lll_reduced(self):
        assert not is_lll_reduced(LatticeBasis.of([[1, 0], [5, 1]]))
        assert is_lll_reduced(LatticeBasis.of([[1, 0], [0, 1]]))
