# test_sostar.py
import pytest

from models.errors import NotAMemberError, ShapeError
from models.quatlin import I, J, K, ONE, ZERO, QMat, Quat, commutator, real_basis
from models.subspace import rank
from services.sostar import (
    AmbientElement,
    SkewForm,
    SoStar,
    dim_so_star,
    right_unit_action,
    signature_diag,
)

FORMS = [
    SkewForm.skew_hermitian(2),
    SkewForm.darboux_even(2),
    SkewForm.darboux_odd(3),
    SkewForm.darboux_signed(1, 1),
]


@pytest.mark.parametrize("form", FORMS, ids=lambda f: f"{f.variant}-{f.n}")
def test_standard_forms_are_skew_and_invertible(form):
    assert form.is_skew()
    assert form.is_invertible()
    assert SkewForm.from_json(form.to_json()) == form


def test_form_constructor_errors():
    with pytest.raises(ValueError):
        SkewForm.darboux_even(3)
    with pytest.raises(ValueError):
        SkewForm.darboux_odd(2)
    with pytest.raises(ValueError):
        SkewForm.standard(3, "DarbouxSigned", 1, 1)
    with pytest.raises(ValueError):
        SkewForm.standard(2, "Symplectic")


def test_signature_diag():
    assert signature_diag(1, 2) == QMat.diag([ONE, -ONE, -ONE])


@pytest.mark.parametrize("n", [1, 2])
def test_graded_basis_dimensions(n):
    so = SoStar(SkewForm.skew_hermitian(n))
    dims = so.dimension_report()
    assert dims == {-2: 1, -1: 4 * n, 0: 4 + n * (2 * n - 1), 1: 4 * n, 2: 1}
    assert sum(dims.values()) == SoStar.expected_dim(n) == dim_so_star(n + 2)


def test_basis_elements_are_homogeneous_members():
    so = SoStar(SkewForm.darboux_even(2))
    for grade, M in so.ambient_basis():
        assert so.ambient_membership(M)
        assert so.grade_of(M) == grade


def test_grading_law(rng):
    so = SoStar(SkewForm.skew_hermitian(2))
    basis = so.ambient_basis()
    for i, j in rng.integers(0, len(basis), size=(60, 2)):
        (gi, M), (gj, N) = basis[int(i)], basis[int(j)]
        C = commutator(M, N)
        assert so.ambient_membership(C)
        if not C.is_zero():
            assert so.grade_of(C) == gi + gj


def test_grade_projection_recovers_element(rng):
    so = SoStar(SkewForm.darboux_even(2))
    basis = [M for _, M in so.ambient_basis()]
    total = QMat.zeros(4, 4)
    for index in rng.integers(0, len(basis), size=6):
        total = total + basis[int(index)] * int(rng.integers(1, 4))
    parts = so.grade_project(total)
    assert parts.total() == total
    with pytest.raises(NotAMemberError):
        so.grade_project(QMat.identity(4))


def test_membership_rejects_identity():
    so = SoStar(SkewForm.skew_hermitian(2))
    assert not so.ambient_membership(QMat.identity(4))
    with pytest.raises(ShapeError):
        so.ambient_membership(QMat.identity(3))


def test_sl2_triple():
    so = SoStar(SkewForm.skew_hermitian(2))
    e, h, f = so.sl2_triple()
    assert commutator(h, e) == e * 2
    assert commutator(h, f) == f * (-2)
    assert commutator(e, f) == h
    assert so.grading_element() == h


def test_heisenberg_bracket_of_minus_one_part(rng):
    so = SoStar(SkewForm.skew_hermitian(2))
    _, _, f = so.sl2_triple()
    vectors = real_basis(2, 1)
    for i, j in rng.integers(0, len(vectors), size=(10, 2)):
        X, Y = vectors[int(i)], vectors[int(j)]
        bracket = commutator(so.embed_minus1(X), so.embed_minus1(Y))
        assert bracket == f * so.levi_form(X, Y)
        assert so.levi_form(X, Y) == -so.levi_form(Y, X)


def test_levi_form_is_nondegenerate():
    for form in FORMS:
        so = SoStar(form)
        assert rank(so.levi_gram(), 4 * form.n) == 4 * form.n


def test_levi_form_value():
    so = SoStar(SkewForm.skew_hermitian(1))
    # 2 Re(Y* j X) with X = 1, Y = j
    assert so.levi_form(QMat.column([ONE]), QMat.column([J])) == 2


def test_ambient_element_roundtrip():
    form = SkewForm.skew_hermitian(2)
    element = AmbientElement(form, a=I, X=[ONE, J], Y=[K, ZERO], c=2, d=-1, A=QMat.scalar(2, J))
    M = element.assemble()
    assert SoStar(form).ambient_membership(M)
    assert AmbientElement.from_matrix(M, form) == element


def test_ambient_element_shape_checks():
    form = SkewForm.skew_hermitian(2)
    with pytest.raises(ShapeError):
        AmbientElement(form, X=QMat.zeros(3, 1))
    with pytest.raises(NotAMemberError):
        AmbientElement.from_matrix(QMat.identity(4), form)


def test_pseudo_hermitian_metrics():
    so = SoStar(SkewForm.skew_hermitian(1))
    assert so.pseudo_hermitian_metrics([ZERO], [ONE]) == (0, 0, 0)
    # (C* j X + X* j C) / 2 = j for C = X = 1
    assert so.pseudo_hermitian_metrics([ONE], [ONE]) == (0, 1, 0)


def test_right_unit_action_composes_like_quaternions():
    X = QMat.column([Quat(1, 2, 3, 4), J])
    assert right_unit_action(right_unit_action(X, J), I) == right_unit_action(X, K)
    assert right_unit_action(right_unit_action(X, I), I) == -X


def test_grading_element_acts_by_degree():
    so = SoStar(SkewForm.darboux_odd(3))
    h = so.grading_element()
    for grade, M in so.ambient_basis():
        assert commutator(h, M) == M * grade


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_grading_law_on_all_pairs(n):
    so = SoStar(SkewForm.skew_hermitian(n))
    basis = so.ambient_basis()
    for gi, M in basis:
        for gj, N in basis:
            C = commutator(M, N)
            if abs(gi + gj) > 2:
                assert C.is_zero()
            elif not C.is_zero():
                assert so.grade_of(C) == gi + gj
