"""
Tests for Galois and multiplicative-rank certificates.
"""
from fractions import Fraction

import pytest

from domain.errors import MissingGaloisWitnessError
from domain.models.galois import CertifiedGalois, ConjugateExpression, NoWitness, Relation
from domain.models.polynomial import FieldElement, IntPolynomial
from domain.services.exact_svc import cyclotomic_polynomial
from domain.services.galois_svc import (
    express_conjugate,
    find_relations,
    is_galois,
    mult_rank,
    unit_order,
    verify_expression,
    verify_relation,
)
from domain.services.roots_svc import isolate_roots


@pytest.mark.unit
class TestUnitOrder:
    def test_gaussian_unit(self):
        i = FieldElement.x(IntPolynomial.of(1, 0, 1))
        assert unit_order(i, 2) == 4
        assert unit_order(-FieldElement.const(i.modulus, 1), 2) == 2
        assert unit_order(FieldElement.const(i.modulus, 1), 2) == 1

    def test_primitive_root_of_unity(self):
        zeta = FieldElement.x(cyclotomic_polynomial(7))
        assert unit_order(zeta, 6) == 7
        assert unit_order(-zeta, 6) == 14

    def test_not_torsion(self, golden):
        assert unit_order(FieldElement.x(golden), 2) is None
        assert unit_order(FieldElement(golden, ()), 2) is None


@pytest.mark.unit
class TestIsGalois:
    @pytest.mark.parametrize("coeffs", [(-1, -1, 1), (-2, 0, 1), (2, 0, 1), (1, 0, 1), (-3, 0, 1)])
    def test_quadratics_are_galois(self, coeffs):
        f = IntPolynomial(coeffs)
        verdict = is_galois(f)
        assert isinstance(verdict, CertifiedGalois)
        assert len(verdict.expressions) == 2
        assert all(verify_expression(f, e) for e in verdict.expressions)

    def test_golden_conjugate_is_one_minus_x(self, golden):
        verdict = is_galois(golden)
        assert verdict.expressions[0].p == FieldElement.x(golden).rep
        assert verdict.expressions[1].p == (Fraction(1), Fraction(-1))

    @pytest.mark.parametrize("n", range(1, 31))
    def test_cyclotomic_fields(self, n):
        f = cyclotomic_polynomial(n)
        verdict = is_galois(f)
        assert verdict.is_certified
        assert all(e.certified and verify_expression(f, e) for e in verdict.expressions)

    def test_linear(self):
        verdict = is_galois(IntPolynomial.of(-3, 2))
        assert verdict.is_certified
        assert len(verdict.expressions) == 1

    def test_cubic_with_galois_closure(self):
        # x^3 - 3x + 1 has cyclic Galois group of order 3
        f = IntPolynomial.of(1, -3, 0, 1)
        verdict = is_galois(f)
        assert isinstance(verdict, CertifiedGalois)
        assert all(verify_expression(f, e) for e in verdict.expressions)

    def test_cube_root_of_two_has_no_witness(self, cube_root_two):
        verdict = is_galois(cube_root_two)
        assert isinstance(verdict, NoWitness)
        assert not verdict.is_certified
        assert verdict.height_bound == 10**6

    def test_lehmer_has_no_witness(self, lehmer):
        assert isinstance(is_galois(lehmer, height_bound=1000), NoWitness)

    def test_express_conjugate_identity(self, golden):
        boxes = isolate_roots(golden, target_width=2.0**-128, precision=256)
        expr = express_conjugate(golden, boxes[0], boxes[0], all_boxes=boxes)
        assert expr.p == FieldElement.x(golden).rep

    def test_express_conjugate_eighth_roots(self):
        # roots of x^4 + 1 sorted by center: zeta^5, zeta^3, zeta^7, zeta
        f = IntPolynomial.of(1, 0, 0, 0, 1)
        boxes = isolate_roots(f, target_width=2.0**-128, precision=256)
        expr = express_conjugate(f, boxes[3], boxes[1], all_boxes=boxes)
        assert expr is not None and expr.certified
        assert expr.p == (Fraction(0), Fraction(0), Fraction(0), Fraction(1))

    def test_express_conjugate_real_to_complex_fails(self, cube_root_two):
        boxes = isolate_roots(cube_root_two, target_width=2.0**-128, precision=256)
        real_root = next(box for box in boxes if box.real)
        complex_root = next(box for box in boxes if not box.real)
        assert express_conjugate(cube_root_two, real_root, complex_root, all_boxes=boxes) is None

    def test_verify_expression_rejects_wrong_map(self, golden):
        wrong = ConjugateExpression(index=1, p=(Fraction(2), Fraction(-1)), certified=False)
        assert not verify_expression(golden, wrong)


@pytest.mark.unit
class TestMultRank:
    def test_golden_rank_one(self, golden):
        estimate = mult_rank(golden)
        assert estimate.num_conjugates == 2
        assert estimate.rank_upper_certified == 1
        assert estimate.rank_heuristic == 1
        assert len(estimate.relation_basis) == 1
        relation = estimate.relation_basis[0]
        assert relation.exponents == (1, 1)
        assert relation.order == 2

    def test_sqrt_two_rank_one(self):
        estimate = mult_rank(IntPolynomial.of(-2, 0, 1))
        assert estimate.rank_upper_certified == 1

    @pytest.mark.parametrize("n", [3, 4, 5, 12])
    def test_cyclotomic_rank_zero(self, n):
        estimate = mult_rank(cyclotomic_polynomial(n))
        assert estimate.rank_upper_certified == 0
        assert estimate.rank_heuristic == 0

    def test_rational_rank_one(self):
        estimate = mult_rank(IntPolynomial.of(-2, 1))
        assert estimate.rank_upper_certified == 1
        assert estimate.relation_basis == ()

    def test_zero_root(self):
        estimate = mult_rank(IntPolynomial.of(0, 1))
        assert estimate.rank_upper_certified == 0
        assert estimate.notes

    def test_needs_galois_witness(self, cube_root_two):
        with pytest.raises(MissingGaloisWitnessError):
            mult_rank(cube_root_two)
        with pytest.raises(MissingGaloisWitnessError):
            mult_rank(cube_root_two, galois=NoWitness(height_bound=10, precision=256))

    def test_heuristic_never_exceeds_certified(self):
        for coeffs in [(-1, -1, 1), (-5, 0, 1), (1, -3, 0, 1), (-3, 2)]:
            estimate = mult_rank(IntPolynomial(coeffs))
            assert estimate.rank_heuristic <= estimate.rank_upper_certified

    def test_relations_are_certified(self, golden):
        verdict = is_galois(golden)
        result = find_relations(golden, verdict.expressions)
        assert result.relations
        assert all(verify_relation(golden, verdict.expressions, r) for r in result.relations)
        assert not verify_relation(golden, verdict.expressions, Relation(exponents=(1, 0), order=2))

    def test_coefficient_budget_marks_partial(self, golden):
        verdict = is_galois(golden)
        estimate = mult_rank(golden, galois=verdict, max_coefficient_bits=64)
        assert estimate.rank_upper_certified <= 2
        if estimate.partial:
            assert estimate.notes
