# test_torsion.py
from fractions import Fraction

import pytest

from models.errors import BracketOffLineError, NotAMemberError
from models.quatlin import ONE, ZERO, QMat, commutator, real_basis
from services.catalog import make_case, symmetric_complement, torsion_example
from services.sostar import SkewForm, SoStar
from services.torsion import (
    LiftedComplement,
    TorsionFunctional,
    TorsionService,
    metric_witness,
    solvable_subalgebra_report,
    symmetric_forcing_check,
    torsion_coefficient,
)


@pytest.fixture(scope="module")
def torsion_pair():
    return torsion_example(2)


def test_complement_is_in_the_ambient_algebra(torsion_pair):
    tauhat, complement = torsion_pair
    so = SoStar(tauhat.form)
    assert not tauhat.is_symmetric
    assert complement.bottom_left_is_zero()
    for X, M in zip(real_basis(2, 1), complement.basis()):
        assert so.ambient_membership(M)
        assert M.submatrix(1, 3, 0, 1) == X


def test_torsion_functional(torsion_pair):
    tauhat, complement = torsion_pair
    functional = torsion_coefficient(tauhat, complement)
    assert not functional.is_zero()
    assert functional.coefficients == (-1, 0, 0, 1, 0, 0, 0, 0)
    assert functional(QMat.column([ONE, ZERO])) == -1
    assert functional.to_json()[0] == "-1"


def test_bracket_with_each_lift_is_twice_lambda_times_tauhat(torsion_pair):
    tauhat, complement = torsion_pair
    T = tauhat.assemble()
    for coefficient, M in zip((-1, 0, 0, 1, 0, 0, 0, 0), complement.basis()):
        assert commutator(T, M) == T * (2 * coefficient)


def test_functional_is_linear():
    functional = TorsionFunctional(tuple(Fraction(k) for k in range(8)))
    assert functional([ONE, ONE]) == 4
    assert functional(QMat.column([ZERO, ZERO])) == 0


def test_solvable_closure(torsion_pair):
    report = solvable_subalgebra_report(*torsion_pair)
    assert report.closure_dim == 9
    assert report.solvable
    assert report.derived_dims[0] == 9
    assert report.derived_dims[-1] == 0


def test_symmetric_complement_has_zero_torsion():
    case = make_case("ns-even:2,0,0")
    complement = symmetric_complement(case)
    assert torsion_coefficient(case.tau, complement).is_zero()
    report = solvable_subalgebra_report(case.tau, complement)
    assert report.closure_dim == 8
    assert report.derived_dims == (8, 0)


def test_off_line_bracket_detected(torsion_pair):
    tauhat, _ = torsion_pair
    so = SoStar(tauhat.form)
    plain = LiftedComplement(tauhat.form, so.embed_minus1, name="plain")
    with pytest.raises(BracketOffLineError) as excinfo:
        torsion_coefficient(tauhat, plain)
    assert excinfo.value.index == 0
    report = TorsionService().report(tauhat, plain)
    assert report["on_line"] is False
    assert report["off_line_index"] == 0
    assert report["closure_dim"] is None


def test_non_member_complement_rejected(torsion_pair):
    tauhat, _ = torsion_pair
    broken = LiftedComplement(tauhat.form, lambda X: QMat.identity(4))
    with pytest.raises(NotAMemberError):
        torsion_coefficient(tauhat, broken)


def test_forcing_check_and_witness(torsion_pair):
    tauhat, _ = torsion_pair
    form = tauhat.form
    assert symmetric_forcing_check(form)
    assert symmetric_forcing_check(form, QMat.zeros(2, 1))
    assert symmetric_forcing_check(SkewForm.darboux_even(2))
    assert metric_witness(form, QMat.zeros(2, 1)) is None
    metric, index, value = metric_witness(form, tauhat.C)
    assert metric in (1, 2, 3)
    assert 0 <= index < 8
    assert value != 0


def test_service_report(torsion_pair):
    report = TorsionService().report(*torsion_pair)
    assert report["n"] == 2
    assert report["on_line"] is True
    assert report["lambda"] == ["-1", "0", "0", "1", "0", "0", "0", "0"]
    assert report["closure_dim"] == 9
    assert report["solvable"] is True
    assert report["forcing_check"] is True
    assert report["metric_witness"]["metric"] in (1, 2, 3)


@pytest.mark.slow
def test_torsion_example_for_n3():
    report = TorsionService().report(*torsion_example(3))
    assert report["on_line"] is True
    assert report["lambda"][0] == "-1"


def test_perturbed_complement_leaves_the_line(torsion_pair):
    tauhat, complement = torsion_pair
    so = SoStar(tauhat.form)
    perturbed = LiftedComplement(tauhat.form, lambda X: complement.lift(X) + so.embed_minus1(X))
    with pytest.raises(BracketOffLineError) as excinfo:
        torsion_coefficient(tauhat, perturbed)
    assert excinfo.value.index == 0
    assert not excinfo.value.residual.is_zero()


def test_closure_of_a_non_linear_symmetric_case_is_perfect():
    case = make_case("ns-even:2,1,0")
    report = solvable_subalgebra_report(case.tau, symmetric_complement(case))
    assert report.closure_dim == 15
    assert not report.solvable
    assert report.derived_dims == (15,)
