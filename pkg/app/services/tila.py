# app/services/tila.py
"""
Transvection algebras generated by an element tau of so*(2n+4).

``TilaBuilder.build`` forms m = {X~(X)} with X~(X) the lift of X in H^n
through f(X) = AX - Xa, takes l = [m, m] inside the ambient algebra and
returns the presentation of (m + l) / (l cap R tau) with the involution,
the quaternionic structure Q0 and the 2-form omega0 on m. The check
functions below never raise; each returns booleans for the report.
"""

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from logger_config import ComputationLogger, get_logger, log_info, log_success, log_warning
from models.errors import (
    GradingViolatedError,
    NotAMemberError,
    QuotientIllDefinedError,
    SymtestFailedError,
)
from models.presentation import (
    centralizer,
    derived_algebra,
    form_rank,
    killing_form,
    max_ideal_in,
    quotient_presentation,
    radical,
)
from models.quatlin import (
    IMAGINARY_UNITS,
    ZERO,
    QMat,
    Quat,
    commutator,
    conj_transpose,
    real_basis,
    real_trace,
    to_fraction,
)
from models.subspace import from_domain_matrix, nullspace, rank, solve, span, to_domain_matrix
from services.sostar import AmbientElement, SkewForm, SoStar, right_unit_action

logger = get_logger("tila")


@dataclass(frozen=True)
class TauElement:
    """
    Generator of t:

        ( a   C* jj   d   )
        ( 0   A       C   )
        ( 1   0      -a*  )

    with Re(a) = 0, A in so*(2n) for the form, d real. C is zero in the
    symmetric case.
    """

    form: SkewForm
    a: Quat = ZERO
    A: QMat = None
    d: Fraction = Fraction(0)
    C: QMat = None

    def __post_init__(self):
        n = self.form.n
        object.__setattr__(self, "a", Quat.coerce(self.a))
        object.__setattr__(self, "d", to_fraction(self.d))
        object.__setattr__(self, "A", QMat.zeros(n, n) if self.A is None else self.A)
        object.__setattr__(self, "C", QMat.zeros(n, 1) if self.C is None else self.C)
        if not self.a.is_imaginary():
            raise NotAMemberError(f"a must be imaginary, got {self.a}")
        jj = self.form.matrix
        if not (conj_transpose(self.A).matmul(jj) + jj.matmul(self.A)).is_zero():
            raise NotAMemberError("A is not in so*(2n) for the chosen form")

    @property
    def n(self):
        return self.form.n

    @property
    def is_symmetric(self):
        return self.C.is_zero()

    def ambient(self):
        return AmbientElement(self.form, a=self.a, Y=self.C, c=1, d=self.d, A=self.A)

    def assemble(self):
        return self.ambient().assemble()

    def to_json(self):
        return {
            "form": self.form.to_json(),
            "a": self.a.to_json(),
            "A": self.A.to_json(),
            "d": str(self.d),
            "C": None if self.is_symmetric else self.C.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        form = SkewForm.from_json(data["form"])
        C = data.get("C")
        return cls(
            form,
            a=Quat.from_json(data["a"]),
            A=QMat.from_json(data["A"]),
            d=to_fraction(data["d"]),
            C=None if C is None else QMat.from_json(C),
        )


@dataclass(frozen=True)
class SymtestReport:
    passed: bool
    residuals: tuple = ()

    def to_json(self):
        return {
            "passed": self.passed,
            "residuals": [{"basis": b, "value": r.to_json()} for b, r in self.residuals],
        }


def residual_operator(A, a, d, X):
    """R(X) = Xd + 2AXa - Xa^2 - A^2 X"""
    AX = A.matmul(X)
    return X * d + AX.right_scale(a) * 2 - X.right_scale(a * a) - A.matmul(AX)


def symtest_residual(tau, X):
    return residual_operator(tau.A, tau.a, tau.d, X)


def symtest(tau):
    if not tau.is_symmetric:
        raise ValueError("symtest applies to generators with C = 0")
    residuals = []
    for index, X in enumerate(real_basis(tau.n, 1)):
        R = symtest_residual(tau, X)
        if not R.is_zero():
            residuals.append((index, R))
    return SymtestReport(not residuals, tuple(residuals))


def lift(tau, X):
    """X~(X): g_{-1} part X, g_1 part f(X) = AX - Xa"""
    f = tau.A.matmul(X) - X.right_scale(tau.a)
    return AmbientElement(tau.form, X=X, Y=f).assemble()


def build_m(tau, form=None):
    """Span of X~(X) over the real basis of H^n, as ambient coordinates"""
    if form is not None and form != tau.form:
        raise ValueError("form does not match the generator's form")
    report = symtest(tau)
    if not report.passed:
        raise SymtestFailedError(list(report.residuals))
    so = SoStar(tau.form)
    tau_matrix = tau.assemble()
    lifts = [lift(tau, X) for X in real_basis(tau.n, 1)]
    for index, M in enumerate(lifts):
        if not commutator(M, tau_matrix).is_zero():
            raise QuotientIllDefinedError(f"lift of basis vector {index} does not commute with tau")
    return span([so.coords(M) for M in lifts], so.ambient_dim)


@dataclass(frozen=True, eq=False)
class Tila:
    tau: TauElement
    g: object  # LiePresentation
    quotient: object  # Quotient
    sigma: tuple
    m_index: tuple
    l_index: tuple
    m_basis: object  # Subspace of ambient coordinates
    l_basis: object  # [m, m] in ambient coordinates
    t_line: object
    m_vectors: tuple  # g_{-1} part of each m basis element
    Q0: tuple  # J1, J2, J3 as row matrices on m
    omega0: tuple
    labels: tuple = field(default_factory=tuple)

    @property
    def n(self):
        return self.tau.n

    @property
    def dim_g(self):
        return self.g.dim

    @property
    def dim_m(self):
        return len(self.m_index)

    @property
    def dim_l(self):
        return len(self.l_index)

    def m_matrix(self, r):
        """Ambient matrix of the r-th m basis element"""
        so = SoStar(self.tau.form)
        return so.matrix(self.quotient.representatives[self.m_index[r]])

    @cached_property
    def rhos(self):
        return [self.rho(i) for i in range(self.dim_l)]

    def rho(self, i):
        """ad(l_i) restricted to m, as rows in m coordinates"""
        dim = self.dim_m
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        li = self.l_index[i]
        for r, mr in enumerate(self.m_index):
            for k, mk in enumerate(self.m_index):
                rows[k][r] = self.g.constant(li, mr, mk)
        return [tuple(row) for row in rows]


class TilaBuilder:
    """Builds the presentation of g = ([m, m] / t) + m for a generator tau"""

    def __init__(self, tau):
        self.tau = tau
        self.so = SoStar(tau.form)
        self.logger = get_logger("tila")
        self.computation = ComputationLogger("tila")

    def build(self):
        tau, so = self.tau, self.so
        self.computation.start("build_tila", f"n={tau.n}")
        try:
            m_space = build_m(tau)
            m_vectors = list(m_space.sparse_basis)

            products = [so.bracket(u, v) for u, v in combinations(m_vectors, 2)]
            l_space = span([w for w in products if w], so.ambient_dim)

            for u in l_space.sparse_basis:
                for v in m_vectors:
                    w = so.bracket(u, v)
                    if w and not m_space.contains(w):
                        raise GradingViolatedError()

            S = m_space + l_space
            tau_coords = so.coords(tau.assemble())
            for v in S.sparse_basis:
                if so.bracket(v, tau_coords):
                    raise QuotientIllDefinedError()
            t_line = span([tau_coords], so.ambient_dim)
            T = l_space.intersect(t_line)
            if T.is_zero():
                log_info(self.logger, "tau is not in [m, m]; quotient by t is trivial")

            quotient = quotient_presentation(S, T, so.bracket)
            P = quotient.presentation

            sigma, labels, m_index, l_index = [], [], [], []
            for idx, rep in enumerate(quotient.representatives):
                odd = any(abs(self._grade(k)) == 1 for k in rep)
                sigma.append(-1 if odd else 1)
                (m_index if odd else l_index).append(idx)
            for idx, s in enumerate(sigma):
                labels.append(f"m{m_index.index(idx)}" if s < 0 else f"l{l_index.index(idx)}")
            P = dataclasses.replace(P, labels=tuple(labels))
            quotient = dataclasses.replace(quotient, presentation=P)

            n = tau.n
            X_parts = tuple(
                so.matrix(quotient.representatives[i]).submatrix(1, n + 1, 0, 1) for i in m_index
            )
            Q0 = tuple(self._structure_matrix(quotient, m_index, X_parts, unit) for unit in IMAGINARY_UNITS)
            omega0 = tuple(tuple(so.levi_form(X, Y) for Y in X_parts) for X in X_parts)

            t = Tila(
                tau=tau,
                g=P,
                quotient=quotient,
                sigma=tuple(sigma),
                m_index=tuple(m_index),
                l_index=tuple(l_index),
                m_basis=m_space,
                l_basis=l_space,
                t_line=T,
                m_vectors=X_parts,
                Q0=Q0,
                omega0=omega0,
                labels=tuple(labels),
            )
            self.computation.success("build_tila", f"dim g = {P.dim}, dim m = {len(m_index)}")
            return t
        except Exception as e:
            self.computation.error("build_tila", e)
            raise

    def _grade(self, coordinate):
        entry = coordinate // 4
        i, j = divmod(entry, self.so.size)
        return self.so.grade_of_position(i, j)

    def _structure_matrix(self, quotient, m_index, X_parts, unit):
        dim = len(m_index)
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        position = {idx: k for k, idx in enumerate(m_index)}
        for r, X in enumerate(X_parts):
            image = self.so.coords(lift(self.tau, right_unit_action(X, unit)))
            coords = quotient.project(image)
            for idx, c in enumerate(coords):
                if c:
                    rows[position[idx]][r] = c
        return tuple(tuple(row) for row in rows)


def build_tila(tau, form=None):
    if form is not None and form != tau.form:
        raise ValueError("form does not match the generator's form")
    return TilaBuilder(tau).build()


# row matrices on m go through DomainMatrix over QQ


def _dm(rows):
    rows = [tuple(row) for row in rows]
    return to_domain_matrix(rows, len(rows[0]) if rows else 0)


def _identity(n):
    return DomainMatrix.eye(n, QQ).to_sparse()


def _same(a, b):
    return (a - b).is_zero_matrix


def _flatten(m):
    return tuple(x for row in from_domain_matrix(m) for x in row)


# verification


def sigma_is_automorphism(t):
    return all(
        t.sigma[i] * t.sigma[j] == t.sigma[k]
        for (i, j), value in t.g.brackets.items()
        for k in value
    )


def l_equals_mm(t):
    P = t.g
    products = [P.basis_bracket(a, b) for a, b in combinations(t.m_index, 2)]
    mm = span([v for v in products if v], P.dim)
    l = span([{i: Fraction(1)} for i in t.l_index], P.dim)
    return mm == l


def no_ideal_in_l(t):
    l = span([{i: Fraction(1)} for i in t.l_index], t.g.dim)
    return max_ideal_in(t.g, l).is_zero()


def q0_relations(t):
    J1, J2, J3 = (_dm(J) for J in t.Q0)
    minus_id = -_identity(t.dim_m)
    return (
        all(_same(J * J, minus_id) for J in (J1, J2, J3))
        and _same(J1 * J2, J3)
        and _same(J2 * J1, -J3)
    )


def q0_invariant(t):
    """[rho(X), J_a] lies in span(J1, J2, J3) for every X in l"""
    Q0 = [_dm(J) for J in t.Q0]
    columns = [_flatten(J) for J in Q0]
    for rho in map(_dm, t.rhos):
        for J in Q0:
            bracket = rho * J - J * rho
            if solve(columns, _flatten(bracket)) is None:
                return False
    return True


def omega_checks(t, omega=None):
    omega = [tuple(r) for r in (omega if omega is not None else t.omega0)]
    dim = t.dim_m
    W = _dm(omega)
    skew = (W + W.transpose()).is_zero_matrix
    nondegenerate = rank(omega, dim) == dim
    hermitian = all(_same(J.transpose() * W * J, W) for J in map(_dm, t.Q0))
    invariant = all((R.transpose() * W + W * R).is_zero_matrix for R in map(_dm, t.rhos))
    return {
        "omega_skew": skew,
        "omega_nondegenerate": nondegenerate,
        "omega_q_hermitian": hermitian,
        "omega_l_invariant": invariant,
    }


def omega_cocycle(t, omega=None):
    """omega extended by zero on l is a Chevalley-Eilenberg 2-cocycle"""
    omega = omega if omega is not None else t.omega0
    position = {idx: k for k, idx in enumerate(t.m_index)}
    P = t.g

    def pairing(vector, z):
        if z not in position:
            return Fraction(0)
        col = position[z]
        return sum((c * omega[position[k]][col] for k, c in vector.items() if k in position), Fraction(0))

    for x, y, z in combinations(range(P.dim), 3):
        total = (
            pairing(P.basis_bracket(x, y), z)
            + pairing(P.basis_bracket(y, z), x)
            + pairing(P.basis_bracket(z, x), y)
        )
        if total:
            return False
    return True


def verify_axioms(t, omega=None):
    """
    Axiom checks for a constructed algebra.

    Args:
        t: Tila from build_tila
        omega: optional replacement for t.omega0 (negative controls)

    Returns:
        dict of named booleans
    """
    record = {
        "sigma_automorphism": sigma_is_automorphism(t),
        "l_equals_mm": l_equals_mm(t),
        "no_ideal_in_l": no_ideal_in_l(t),
        "q0_relations": q0_relations(t),
        "q0_invariant": q0_invariant(t),
        "antisymmetry": t.g.is_antisymmetric(),
        "jacobi": t.g.satisfies_jacobi(),
        "dim_m_is_4n": t.dim_m == 4 * t.n,
    }
    record.update(omega_checks(t, omega))
    record["omega_cocycle"] = omega_cocycle(t, omega)
    failed = sorted(k for k, v in record.items() if not v)
    if failed:
        log_warning(logger, f"axiom checks failed: {', '.join(failed)}")
    else:
        log_success(logger, f"all {len(record)} axiom checks passed")
    return record


# forms on m


@dataclass(frozen=True)
class TraceForm:
    gram: tuple
    rank: int
    degenerate: bool
    formula_agrees: bool

    def to_json(self):
        return {"rank": self.rank, "degenerate": self.degenerate, "formula_agrees": self.formula_agrees}


def ambient_trace_form_on_m(t):
    """Gram matrix of real_trace(X~(X) X~(Y)) on the m basis"""
    mats = [t.m_matrix(r) for r in range(t.dim_m)]
    gram = tuple(tuple(real_trace(M.matmul(N)) for N in mats) for M in mats)
    jj = t.tau.form.matrix

    def f(X):
        return t.tau.A.matmul(X) - X.right_scale(t.tau.a)

    reduced = []
    for X in t.m_vectors:
        row = []
        for Y in t.m_vectors:
            value = conj_transpose(f(X)).matmul(jj).matmul(Y) - conj_transpose(X).matmul(jj).matmul(f(Y))
            row.append(8 * value[0, 0].w)
        reduced.append(tuple(row))
    r = rank(list(gram), t.dim_m)
    return TraceForm(gram, r, r < t.dim_m, tuple(reduced) == gram)


@dataclass(frozen=True)
class CentralElement:
    status: str  # "ok", "not-applicable" or "no-ad-realization"
    I: tuple = ()
    Z0: tuple = None
    commutes_with_l: bool = False
    killing_skew: bool = False
    ad_matches: bool = False
    central_in_l: bool = False
    l_is_centralizer: bool = False

    @property
    def checks_pass(self):
        if self.status == "not-applicable":
            return True
        return self.status == "ok" and all(
            (self.commutes_with_l, self.killing_skew, self.ad_matches, self.central_in_l)
        )

    def to_json(self):
        return {
            "status": self.status,
            "Z0": None if self.Z0 is None else [str(c) for c in self.Z0],
            "commutes_with_l": self.commutes_with_l,
            "killing_skew": self.killing_skew,
            "ad_matches": self.ad_matches,
            "central_in_l": self.central_in_l,
            "l_is_centralizer": self.l_is_centralizer,
        }


def intrinsic_killing_on_m(t, B=None):
    B = B if B is not None else killing_form(t.g)
    return [tuple(B[i][j] for j in t.m_index) for i in t.m_index]


def central_element_analysis(t, B=None):
    """Solve B_m(X, Y) = omega0(X, I Y) for I and realize I as ad(Z0), Z0 in Z(l)"""
    B = B if B is not None else killing_form(t.g)
    Bm = intrinsic_killing_on_m(t, B)
    dim = t.dim_m
    if rank(Bm, dim) < dim:
        return CentralElement("not-applicable")

    omega = [tuple(r) for r in t.omega0]
    omega_columns = [tuple(omega[r][c] for r in range(dim)) for c in range(dim)]
    columns = []
    for s in range(dim):
        target = tuple(Bm[r][s] for r in range(dim))
        column = solve(omega_columns, target)
        if column is None:
            log_warning(logger, "omega0 is degenerate; B_m = omega0(., I .) has no solution")
            return CentralElement("no-ad-realization")
        columns.append(column)
    I = [tuple(columns[s][k] for s in range(dim)) for k in range(dim)]

    rhos = [_dm(rho) for rho in t.rhos]
    I_dm, B_dm = _dm(I), _dm(Bm)
    commutes = all(_same(rho * I_dm, I_dm * rho) for rho in rhos)
    skew = (I_dm.transpose() * B_dm + B_dm * I_dm).is_zero_matrix

    z = solve([_flatten(rho) for rho in rhos], _flatten(I_dm))
    if z is None:
        log_warning(logger, "I is not of the form ad(Z0) for Z0 in l")
        return CentralElement("no-ad-realization", tuple(I), None, commutes, skew)

    Z0 = [Fraction(0)] * t.g.dim
    for i, c in zip(t.l_index, z):
        Z0[i] = c
    Z0 = tuple(Z0)
    ad = t.g.ad_rows(Z0)
    ad_on_m = [tuple(ad[k][r] for r in t.m_index) for k in t.m_index]
    ad_matches = ad_on_m == I
    central = all(not t.g.bracket_sparse(Z0, {i: Fraction(1)}) for i in t.l_index)
    l_space = span([{i: Fraction(1)} for i in t.l_index], t.g.dim)
    l_is_centralizer = centralizer(t.g, Z0) == l_space
    return CentralElement("ok", tuple(I), Z0, commutes, skew, ad_matches, central, l_is_centralizer)


# Levi structure


def _coordinate_restriction(S, allowed):
    """Vectors of S supported on the allowed coordinates"""
    allowed = set(allowed)
    forbidden = sorted({k for row in S.sparse_basis for k in row} - allowed)
    if not forbidden:
        return list(S.sparse_basis)
    constraints = [tuple(row.get(k, Fraction(0)) for row in S.sparse_basis) for k in forbidden]
    return [S.combine_sparse(a) for a in nullspace(constraints, S.dim)]


def _block_coordinates(size, rows, cols):
    coords = []
    for i in rows:
        for j in cols:
            base = 4 * (i * size + j)
            coords.extend(range(base, base + 4))
    return coords


@dataclass(frozen=True)
class LeviStructure:
    dim_g: int
    radical_dim: int
    semisimple_dim: int
    radical_abelian: bool
    radical_solvable: bool
    r_qH_dim: int = None
    r_deg_dim: int = None

    def to_json(self):
        return dataclasses.asdict(self)


def levi_structure(t, blocks=None):
    """
    Radical and semisimple dimensions of g, with the radical split by block position.

    Args:
        t: Tila
        blocks: optional {name: (start, end)} index ranges of the ambient matrix
            (first, p1, q1, r1, mid, p2, q2, r2, last)
    """
    P = t.g
    rad = radical(P)
    abelian = derived_algebra(P, rad).is_zero()
    structure = LeviStructure(
        dim_g=P.dim,
        radical_dim=rad.dim,
        semisimple_dim=P.dim - rad.dim,
        radical_abelian=abelian,
        radical_solvable=True,
    )
    if not blocks:
        return structure

    size = t.tau.n + 2

    def indices(*names):
        out = []
        for name in names:
            start, end = blocks.get(name, (0, 0))
            out.extend(range(start, end))
        return out

    everything = list(range(size))
    degenerate = indices("r1", "mid", "r2")
    deg_coords = _block_coordinates(size, degenerate, everything) + _block_coordinates(size, everything, degenerate)
    qh_coords = _block_coordinates(size, indices("q1", "p2", "last"), indices("first", "p1", "q2"))

    def split(coords):
        vectors = _coordinate_restriction(t.quotient.S, coords)
        projected = span([t.quotient.project(v) for v in vectors], P.dim)
        return rad.intersect(projected).dim

    return dataclasses.replace(structure, r_qH_dim=split(qh_coords), r_deg_dim=split(deg_coords))


def killing_summary(t, B=None):
    B = B if B is not None else killing_form(t.g)
    trace = ambient_trace_form_on_m(t)
    return {
        "intrinsic_rank": form_rank(B) if t.g.dim else 0,
        "ambient_m_rank": trace.rank,
        "degenerate": trace.degenerate,
        "trace_formula_agrees": trace.formula_agrees,
    }


EXPECTED_KEYS = (
    "dim_g",
    "dim_m",
    "dim_l",
    "semisimple_dim",
    "radical_dim",
    "r_qH_dim",
    "r_deg_dim",
    "radical_abelian",
    "killing_degenerate",
)


def verification_report(t, blocks=None, expected=None):
    """
    Full verification record of a built algebra.

    Args:
        t: Tila
        blocks: labeled block ranges for the radical split, if any
        expected: expected dimensions and flags to compare against, if any

    Returns:
        dict ready for JSON encoding (Fractions as strings); "passed" is true
        iff every axiom check and the central element checks hold and nothing
        differs from ``expected``
    """
    computation = ComputationLogger("tila")
    computation.start("verification_report", f"dim g = {t.dim_g}")
    B = killing_form(t.g)
    axioms = verify_axioms(t)
    killing = killing_summary(t, B)
    levi = levi_structure(t, blocks).to_json()
    central = central_element_analysis(t, B)
    measured = {
        "dim_g": t.dim_g,
        "dim_m": t.dim_m,
        "dim_l": t.dim_l,
        "semisimple_dim": levi["semisimple_dim"],
        "radical_dim": levi["radical_dim"],
        "r_qH_dim": levi["r_qH_dim"],
        "r_deg_dim": levi["r_deg_dim"],
        "radical_abelian": levi["radical_abelian"],
        "killing_degenerate": killing["degenerate"],
    }
    mismatches = []
    if expected:
        mismatches = sorted(
            key for key in EXPECTED_KEYS if expected.get(key) is not None and expected[key] != measured[key]
        )
    passed = all(axioms.values()) and central.checks_pass and not mismatches
    report = {
        "dim_g": t.dim_g,
        "dim_m": t.dim_m,
        "dim_l": t.dim_l,
        "tau": t.tau.to_json(),
        "axioms": axioms,
        "killing": killing,
        "levi": levi,
        "central": central.to_json(),
        "Z0": None if central.Z0 is None else [str(c) for c in central.Z0],
        "expected": None if expected is None else {"values": expected, "mismatches": mismatches},
        "passed": passed,
    }
    computation.success("verification_report", "passed" if passed else "checks failed")
    return report
