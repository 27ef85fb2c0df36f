# test_tila.py
import dataclasses
import logging
from fractions import Fraction

import pytest

from models.errors import NotAMemberError, SymtestFailedError
from models.quatlin import I, ONE, QMat, commutator
from services.catalog import admissible_tags, torsion_tauhat
from services.sostar import SkewForm
from services.tila import (
    TauElement,
    ambient_trace_form_on_m,
    build_m,
    build_tila,
    central_element_analysis,
    levi_structure,
    omega_checks,
    q0_invariant,
    q0_relations,
    symtest,
    verification_report,
    verify_axioms,
)


@pytest.fixture(scope="module")
def ns_case(catalog_service):
    return catalog_service.build("ns-even:2,1,0")


@pytest.fixture(scope="module")
def linear_case(catalog_service):
    return catalog_service.build("ns-even:2,0,0")


@pytest.fixture(scope="module")
def m1_case(catalog_service):
    return catalog_service.build("m1:2")


def zeros(dim):
    return [[Fraction(0)] * dim for _ in range(dim)]


def test_tau_requires_imaginary_a():
    with pytest.raises(NotAMemberError):
        TauElement(SkewForm.skew_hermitian(2), a=ONE)


def test_tau_requires_a_in_so_star():
    with pytest.raises(NotAMemberError):
        TauElement(SkewForm.skew_hermitian(2), A=QMat.identity(2))


def test_tau_json_roundtrip():
    tau = TauElement(SkewForm.skew_hermitian(2), a=I, d=-1)
    data = tau.to_json()
    assert data["C"] is None
    assert TauElement.from_json(data) == tau


def test_symtest_failure_lists_every_basis_vector():
    tau = TauElement(SkewForm.skew_hermitian(2), d=1)
    report = symtest(tau)
    assert not report.passed
    assert [index for index, _ in report.residuals] == list(range(8))
    with pytest.raises(SymtestFailedError) as excinfo:
        build_m(tau)
    assert len(excinfo.value.residuals) == 8


def test_symtest_rejects_torsion_generator():
    with pytest.raises(ValueError):
        symtest(torsion_tauhat(2))


def test_build_rejects_foreign_form():
    tau = TauElement(SkewForm.skew_hermitian(2), a=I, d=-1)
    with pytest.raises(ValueError):
        build_tila(tau, SkewForm.darboux_even(2))


def test_ns_dimensions(ns_case):
    _, t = ns_case
    assert (t.dim_g, t.dim_m, t.dim_l) == (15, 8, 7)
    assert t.labels.count("m0") == 1
    assert sum(1 for s in t.sigma if s < 0) == 8


def test_m_basis_commutes_with_tau(ns_case):
    case, t = ns_case
    T = case.tau.assemble()
    for r in range(t.dim_m):
        assert commutator(t.m_matrix(r), T).is_zero()


def test_ns_axioms_hold(ns_case):
    _, t = ns_case
    record = verify_axioms(t)
    assert all(record.values()), sorted(k for k, v in record.items() if not v)


def test_ns_levi_structure(ns_case):
    case, t = ns_case
    levi = levi_structure(t, case.blocks)
    assert levi.radical_dim == 5
    assert levi.semisimple_dim == 10
    assert levi.r_qH_dim == 5
    assert levi.r_deg_dim == 0


def test_ns_trace_form_is_degenerate(ns_case):
    _, t = ns_case
    trace = ambient_trace_form_on_m(t)
    assert trace.degenerate
    assert trace.formula_agrees


def test_ns_central_element_not_applicable(ns_case):
    _, t = ns_case
    central = central_element_analysis(t)
    assert central.status == "not-applicable"
    assert central.checks_pass


def test_ns_report_matches_expected(ns_case):
    case, t = ns_case
    report = verification_report(t, case.blocks, case.expected)
    assert report["expected"]["mismatches"] == []
    assert report["passed"]


def test_omega_negative_controls(ns_case):
    _, t = ns_case
    degenerate = omega_checks(t, zeros(t.dim_m))
    assert not degenerate["omega_nondegenerate"]
    identity = [[Fraction(int(i == j)) for j in range(t.dim_m)] for i in range(t.dim_m)]
    assert not verify_axioms(t, identity)["omega_skew"]


def test_quaternionic_structure_checks(ns_case):
    _, t = ns_case
    assert q0_relations(t)
    assert q0_invariant(t)
    checks = omega_checks(t)
    assert checks["omega_q_hermitian"] and checks["omega_l_invariant"]
    J1, J2, J3 = t.Q0
    assert not q0_relations(dataclasses.replace(t, Q0=(J2, J1, J3)))


def test_wrong_expectation_is_reported(ns_case):
    case, t = ns_case
    expected = dict(case.expected, radical_dim=6)
    report = verification_report(t, case.blocks, expected)
    assert report["expected"]["mismatches"] == ["radical_dim"]
    assert not report["passed"]


def test_linear_model_is_abelian(linear_case):
    case, t = linear_case
    assert t.dim_g == 8
    assert t.dim_l == 0
    assert t.g.is_abelian()
    trace = ambient_trace_form_on_m(t)
    assert trace.rank == 0
    report = verification_report(t, case.blocks, case.expected)
    assert report["central"]["status"] == "not-applicable"
    assert report["levi"]["r_deg_dim"] == 8
    assert report["passed"]


def test_m1_is_semisimple(m1_case):
    case, t = m1_case
    assert t.dim_g == 15
    report = verification_report(t, case.blocks, case.expected)
    assert report["levi"]["radical_dim"] == 0
    assert not report["killing"]["degenerate"]
    assert report["central"]["status"] == "ok"
    assert report["Z0"] is not None
    assert report["passed"]
    central = central_element_analysis(t)
    assert central.commutes_with_l and central.killing_skew and central.ad_matches


def test_build_logs_timing(caplog):
    caplog.set_level(logging.INFO)
    build_tila(TauElement(SkewForm.darboux_even(2)))
    assert "[SUCCESS] build_tila completed" in caplog.text


@pytest.mark.slow
def test_ns_odd_radical_is_not_abelian(catalog_service):
    case, t = catalog_service.build("ns-odd:3,1,0")
    report = verification_report(t, case.blocks, case.expected)
    assert report["dim_g"] == 23
    assert report["levi"]["radical_dim"] == 13
    assert report["levi"]["radical_abelian"] is False
    assert report["passed"]


def test_killing_form_is_ad_invariant(ns_case, rng):
    from models.presentation import killing_form

    _, t = ns_case
    P = t.g
    B = killing_form(P)

    def pair(u, k):
        return sum((c * B[i][k] for i, c in u.items()), Fraction(0))

    for x, y, z in rng.integers(0, P.dim, size=(25, 3)):
        x, y, z = int(x), int(y), int(z)
        xy = P.bracket_sparse({x: 1}, {y: 1})
        xz = P.bracket_sparse({x: 1}, {z: 1})
        assert pair(xy, z) + pair(xz, y) == 0


@pytest.mark.slow
@pytest.mark.parametrize(
    "text",
    ["ns-even:2,0,1"]
    + [str(tag) for n in (2, 3, 4) for tag in admissible_tags(n) if tag.family in ("m1", "m2", "m3")],
)
def test_more_catalog_cases_verify(catalog_service, text):
    case, t = catalog_service.build(text)
    report = verification_report(t, case.blocks, case.expected)
    assert report["dim_g"] == case.expected["dim_g"]
    assert report["passed"], report["expected"]["mismatches"]


@pytest.mark.slow
@pytest.mark.parametrize(
    "text",
    [str(tag) for n in (2, 3, 4, 5) for tag in admissible_tags(n) if tag.family in ("ns-even", "ns-odd")],
)
def test_non_semisimple_cases_match_expected(catalog_service, text):
    case, t = catalog_service.build(text)
    report = verification_report(t, case.blocks, case.expected)
    assert report["expected"]["mismatches"] == []
    assert all(report["axioms"].values())
    assert report["levi"]["r_deg_dim"] == case.expected["r_deg_dim"]
