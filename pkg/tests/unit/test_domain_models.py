"""
Tests for domain models.
"""
from fractions import Fraction

from pydantic import ValidationError
import pytest

from domain.errors import ModulusMismatchError, NonInvertibleElementError, ZeroPolynomialError
from domain.models.bounds import ChainVerdict, Inequality, ParameterPoint, SuiteReport, Verdict
from domain.models.corpus import AnalysisReport, AnalysisStatus, CorpusEntry, GaloisStatus
from domain.models.enclosure import RealEnclosure
from domain.models.galois import LatticeBasis, NoWitness
from domain.models.polynomial import FieldElement, IntPolynomial, qp_divmod, qp_gcd, qp_mul
from domain.models.settings import DEFAULT_SETTINGS, EngineSettings


def test_int_polynomial_trims_trailing_zeros():
    p = IntPolynomial((1, 2, 0, 0))
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert p.lead == 2


def test_int_polynomial_evaluation_and_str(golden):
    assert golden(2) == 1
    assert golden(Fraction(1, 2)) == Fraction(-5, 4)
    assert str(golden) == "x^2 - x - 1"
    assert str(IntPolynomial.of(0, -3)) == "-3*x"


def test_int_polynomial_from_rational():
    p = IntPolynomial.from_rational((Fraction(1, 2), Fraction(0), Fraction(-3, 4)))
    assert p == IntPolynomial.of(-2, 0, 3)
    with pytest.raises(ZeroPolynomialError):
        IntPolynomial.from_rational(())


def test_zero_polynomial_has_no_lead():
    zero = IntPolynomial(())
    assert zero.is_zero
    with pytest.raises(ZeroPolynomialError):
        _ = zero.lead


def test_qpoly_divmod_and_gcd():
    a = qp_mul((Fraction(-1), Fraction(1)), (Fraction(2), Fraction(1)))
    quotient, remainder = qp_divmod(a, (Fraction(-1), Fraction(1)))
    assert quotient == (Fraction(2), Fraction(1))
    assert remainder == ()
    assert qp_gcd(a, (Fraction(-2), Fraction(2))) == (Fraction(-1), Fraction(1))


def test_field_element_golden_field(golden):
    x = FieldElement.x(golden)
    one = FieldElement.const(golden, 1)
    assert (x * (x - one)).is_one
    assert x.inverse() == x - one
    assert (x**-1) * x == one
    # x^2 = x + 1
    assert x**2 == x + one


def test_field_element_reduces_on_construction(golden):
    element = FieldElement(golden, (Fraction(0), Fraction(0), Fraction(1)))
    assert element.rep == (Fraction(1), Fraction(1))


def test_field_element_evaluate(golden):
    x = FieldElement.x(golden)
    assert x.evaluate(golden.coeffs).is_zero


def test_field_element_not_invertible():
    modulus = IntPolynomial.of(-1, 0, 1)  # (x - 1)(x + 1)
    element = FieldElement(modulus, (Fraction(-1), Fraction(1)))
    with pytest.raises(NonInvertibleElementError) as exc:
        element.inverse()
    assert exc.value.factor == IntPolynomial.of(-1, 1)


def test_field_element_modulus_mismatch(golden, smyth):
    with pytest.raises(ModulusMismatchError):
        _ = FieldElement.x(golden) + FieldElement.x(smyth)


def test_field_element_rejects_constant_modulus():
    with pytest.raises(ValueError):
        FieldElement(IntPolynomial.of(3), ())


def test_lattice_basis_shape():
    basis = LatticeBasis.of([[1, 0, 2], [0, 1, 3]])
    assert basis.rank == 2
    assert basis.dimension == 3
    assert LatticeBasis.of([]).dimension == 0


def test_no_witness_is_not_certified():
    assert NoWitness(height_bound=10, precision=128).is_certified is False


def test_engine_settings_defaults():
    assert DEFAULT_SETTINGS.precision_bits == 128
    assert DEFAULT_SETTINGS.precision_cap == 4096
    assert DEFAULT_SETTINGS.lll_height_bound == 10**6
    assert DEFAULT_SETTINGS.relation_bound == 20
    assert DEFAULT_SETTINGS.delta == Fraction(99, 100)


def test_engine_settings_validation():
    with pytest.raises(ValidationError):
        EngineSettings(precision_bits=8192, precision_cap=4096)
    with pytest.raises(ValidationError):
        EngineSettings(lll_delta=0.2)
    with pytest.raises(ValidationError):
        EngineSettings(jobs=0)
    with pytest.raises(ValidationError):
        EngineSettings(precision_bits=64, precision_cap=128)


def test_engine_settings_frozen():
    with pytest.raises(ValidationError):
        DEFAULT_SETTINGS.precision_bits = 64


def test_parameter_point_str():
    assert str(ParameterPoint(d=3, rho=2)) == "d=3,rho=2"
    assert str(ParameterPoint(eps=Fraction(1, 2), n=7)) == "eps=1/2,n=7"


def test_chain_verdict_margin():
    verdict = ChainVerdict(
        inequality=Inequality.THEOREM.value,
        point=ParameterPoint(d=1, rho=1),
        verdict=Verdict.HOLDS,
        lhs_log=RealEnclosure.exact(1),
        rhs_log=RealEnclosure.exact(3),
    )
    assert verdict.holds
    assert verdict.margin.contains(2)
    assert "(f) at d=1,rho=1: holds" in verdict.describe()


def test_chain_verdict_equality_margin_is_zero():
    verdict = ChainVerdict(
        inequality="b",
        point=ParameterPoint(rho=8),
        verdict=Verdict.HOLDS,
        lhs_log=RealEnclosure.exact(5),
        rhs_log=RealEnclosure.exact(5),
        equality=True,
    )
    assert verdict.margin.is_point
    assert verdict.margin.contains(0)
    assert "(equality)" in verdict.describe()


def test_suite_report_record_routing():
    report = SuiteReport(suite="chain")
    point = ParameterPoint(d=2, rho=2)
    report.record(ChainVerdict("c", point, Verdict.HOLDS, precision=128))
    report.record(ChainVerdict("e", point, Verdict.FAILS, whitelisted=True))
    report.record(ChainVerdict("f", point, Verdict.FAILS))
    report.record(ChainVerdict("d", point, Verdict.INDETERMINATE, precision=512))
    report.add_passed(10)

    assert report.checked == 14
    assert report.passed == 11
    assert report.whitelisted == 1
    assert report.failed == 1
    assert report.indeterminate == 1
    assert len(report.failures) == 2
    assert report.expected_failures[0].inequality == "e"
    assert report.precision == 512
    assert not report.ok


def test_suite_report_equality_points():
    report = SuiteReport(suite="constant")
    report.record(ChainVerdict("b", ParameterPoint(rho=8), Verdict.HOLDS, equality=True))
    assert report.ok
    assert report.equality_points == ["(b) rho=8"]


def test_corpus_entry_is_frozen(golden):
    entry = CorpusEntry(label="golden", poly=golden, galois=True, h="0.24060591253")
    assert entry.root_of_unity is None
    with pytest.raises(ValidationError):
        entry.label = "other"


def test_analysis_report_theorem_applies(golden):
    report = AnalysisReport(label="golden", poly=golden, degree=2)
    assert report.status == AnalysisStatus.OK
    assert not report.theorem_applies
    report.galois = GaloisStatus.CERTIFIED
    report.h = RealEnclosure.from_bounds(Fraction(24, 100), Fraction(25, 100))
    assert report.theorem_applies
    report.exact_zero = True
    assert not report.theorem_applies
