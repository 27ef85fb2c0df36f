# app/services/sostar.py
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from logger_config import get_logger, log_debug, log_info
from models.errors import NotAMemberError, ShapeError
from models.quatlin import (
    J,
    ONE,
    UNITS,
    ZERO,
    QMat,
    Quat,
    commutator,
    conj_transpose,
    real_basis,
    realify,
    realify_sparse,
    unrealify,
    unrealify_sparse,
)
from models.subspace import nullspace, rank

VARIANTS = ("SkewHermitian", "DarbouxEven", "DarbouxOdd", "DarbouxSigned")


def as_column(vector):
    """Accept an n x 1 QMat or a sequence of quaternions"""
    if isinstance(vector, QMat):
        if vector.cols != 1:
            raise ShapeError(f"expected a column vector, got shape {vector.shape}")
        return vector
    return QMat.column(list(vector))


def signature_diag(p, q):
    """I_{p,q} = diag(+1 x p, -1 x q)"""
    return QMat.diag([ONE] * p + [-ONE] * q)


@dataclass(frozen=True)
class SkewForm:
    """A skew-Hermitian form on H^n, stored as its matrix"""

    n: int
    variant: str
    matrix: QMat
    p: int = 0
    q: int = 0

    @classmethod
    def skew_hermitian(cls, n):
        return cls(n, "SkewHermitian", QMat.scalar(n, J))

    @classmethod
    def darboux_even(cls, n):
        if n % 2:
            raise ValueError(f"DarbouxEven needs even n, got {n}")
        h = n // 2
        matrix = QMat.block([h, h], [h, h], {(0, 1): QMat.identity(h), (1, 0): -QMat.identity(h)})
        return cls(n, "DarbouxEven", matrix)

    @classmethod
    def darboux_odd(cls, n):
        if n % 2 == 0:
            raise ValueError(f"DarbouxOdd needs odd n, got {n}")
        h = (n - 1) // 2
        matrix = QMat.block(
            [h, 1, h],
            [h, 1, h],
            {(0, 2): QMat.identity(h), (1, 1): QMat.scalar(1, J), (2, 0): -QMat.identity(h)},
        )
        return cls(n, "DarbouxOdd", matrix)

    @classmethod
    def darboux_signed(cls, p, q):
        h = p + q
        if h == 0:
            raise ValueError("DarbouxSigned needs p + q > 0")
        sig = signature_diag(p, q)
        matrix = QMat.block([h, h], [h, h], {(0, 1): sig, (1, 0): -sig})
        return cls(2 * h, "DarbouxSigned", matrix, p, q)

    @classmethod
    def standard(cls, n, variant, p=0, q=0):
        if variant == "SkewHermitian":
            return cls.skew_hermitian(n)
        if variant == "DarbouxEven":
            return cls.darboux_even(n)
        if variant == "DarbouxOdd":
            return cls.darboux_odd(n)
        if variant == "DarbouxSigned":
            form = cls.darboux_signed(p, q)
            if form.n != n:
                raise ValueError(f"DarbouxSigned({p},{q}) has n = {form.n}, not {n}")
            return form
        raise ValueError(f"unknown form variant {variant!r}; expected one of {VARIANTS}")

    def is_skew(self):
        return (conj_transpose(self.matrix) + self.matrix).is_zero()

    def is_invertible(self):
        columns = [realify(self.matrix.matmul(e)) for e in real_basis(self.n, 1)]
        return rank(columns, 4 * self.n) == 4 * self.n

    def to_json(self):
        return {"n": self.n, "variant": self.variant, "p": self.p, "q": self.q}

    @classmethod
    def from_json(cls, data):
        return cls.standard(int(data["n"]), data["variant"], int(data.get("p", 0)), int(data.get("q", 0)))


@dataclass(frozen=True)
class AmbientElement:
    """
    Block parameters of an element of so*(2n+4):

        ( a      Y*jj   d    )
        ( X      A      Y    )
        ( c     -X*jj  -a*   )
    """

    form: SkewForm
    a: Quat = ZERO
    X: QMat = None
    Y: QMat = None
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)
    A: QMat = None

    def __post_init__(self):
        n = self.form.n
        object.__setattr__(self, "a", Quat.coerce(self.a))
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "d", Fraction(self.d))
        object.__setattr__(self, "X", QMat.zeros(n, 1) if self.X is None else as_column(self.X))
        object.__setattr__(self, "Y", QMat.zeros(n, 1) if self.Y is None else as_column(self.Y))
        object.__setattr__(self, "A", QMat.zeros(n, n) if self.A is None else self.A)
        if self.X.rows != n or self.Y.rows != n or self.A.shape != (n, n):
            raise ShapeError(f"block shapes do not match n = {n}")

    def assemble(self):
        n, jj = self.form.n, self.form.matrix
        sizes = [1, n, 1]
        blocks = {
            (0, 0): QMat.scalar(1, self.a),
            (0, 1): conj_transpose(self.Y).matmul(jj),
            (0, 2): QMat.scalar(1, self.d),
            (1, 0): self.X,
            (1, 1): self.A,
            (1, 2): self.Y,
            (2, 0): QMat.scalar(1, self.c),
            (2, 1): -conj_transpose(self.X).matmul(jj),
            (2, 2): QMat.scalar(1, -self.a.conj()),
        }
        return QMat.block(sizes, sizes, blocks)

    @classmethod
    def from_matrix(cls, M, form):
        n = form.n
        if M.shape != (n + 2, n + 2):
            raise ShapeError(f"expected a {n + 2}x{n + 2} matrix, got {M.shape}")
        if not SoStar(form).ambient_membership(M):
            raise NotAMemberError("matrix is not in so*(2n+4) for the given form")
        return cls(
            form,
            a=M[0, 0],
            X=M.submatrix(1, n + 1, 0, 1),
            Y=M.submatrix(1, n + 1, n + 1, n + 2),
            c=M[n + 1, 0].w,
            d=M[0, n + 1].w,
            A=M.submatrix(1, n + 1, 1, n + 1),
        )


@dataclass(frozen=True)
class GradedParts:
    parts: dict

    def __getitem__(self, grade):
        return self.parts[grade]

    def total(self):
        out = None
        for grade in sorted(self.parts):
            out = self.parts[grade] if out is None else out + self.parts[grade]
        return out

    def support(self):
        return sorted(g for g, m in self.parts.items() if not m.is_zero())


GRADES = (-2, -1, 0, 1, 2)


def dim_so_star(m):
    """Real dimension of so*(2m)"""
    return m * (2 * m - 1)


class SoStar:
    """The ambient algebra so*(2n+4) for a fixed skew-Hermitian form"""

    def __init__(self, form):
        self.form = form
        self.n = form.n
        self.size = form.n + 2
        self.logger = get_logger("sostar")

    @cached_property
    def J_full(self):
        n = self.n
        sizes = [1, n, 1]
        return QMat.block(
            sizes,
            sizes,
            {(0, 2): QMat.identity(1), (1, 1): self.form.matrix, (2, 0): -QMat.identity(1)},
        )

    @property
    def ambient_dim(self):
        """Real coordinate dimension of (n+2) x (n+2) quaternionic matrices"""
        return 4 * self.size * self.size

    @staticmethod
    def expected_dim(n):
        return dim_so_star(n + 2)

    # membership and grading

    def _check_size(self, M):
        if M.shape != (self.size, self.size):
            raise ShapeError(f"expected a {self.size}x{self.size} matrix for n = {self.n}, got {M.shape}")

    def membership_residual(self, M):
        self._check_size(M)
        return conj_transpose(M).matmul(self.J_full) + self.J_full.matmul(M)

    def ambient_membership(self, M):
        return self.membership_residual(M).is_zero()

    def _weight(self, index):
        if index == 0:
            return 1
        if index == self.size - 1:
            return -1
        return 0

    def grade_of_position(self, i, j):
        return self._weight(i) - self._weight(j)

    def grade_project(self, M):
        if isinstance(M, AmbientElement):
            M = M.assemble()
        if not self.ambient_membership(M):
            raise NotAMemberError("grade_project needs an element of so*(2n+4)")
        buckets = {g: {} for g in GRADES}
        for (i, j), q in M.nonzero.items():
            buckets[self.grade_of_position(i, j)][(i, j)] = q
        return GradedParts({g: QMat.from_sparse(self.size, self.size, items) for g, items in buckets.items()})

    def grade_of(self, M):
        """Grade of a homogeneous nonzero element, else None"""
        support = {self.grade_of_position(i, j) for (i, j) in M.nonzero}
        return support.pop() if len(support) == 1 else None

    # embeddings

    def embed_minus1(self, X):
        X = as_column(X)
        return AmbientElement(self.form, X=X).assemble()

    def embed_plus1(self, Y):
        Y = as_column(Y)
        return AmbientElement(self.form, Y=Y).assemble()

    def sl2_triple(self):
        """(e, h, f) with e = E13, f = E31, h = diag(1, 0, -1)"""
        e = AmbientElement(self.form, d=1).assemble()
        f = AmbientElement(self.form, c=1).assemble()
        h = AmbientElement(self.form, a=ONE).assemble()
        return e, h, f

    def grading_element(self):
        return self.sl2_triple()[1]

    # bases

    @cached_property
    def so_star_basis(self):
        """Basis of so*(2n) = {A : A* jj + jj A = 0} as n x n matrices"""
        n, jj = self.n, self.form.matrix
        images = []
        for E in real_basis(n, n):
            images.append(realify(conj_transpose(E).matmul(jj) + jj.matmul(E)))
        # rows of the constraint matrix are the coordinates of the images
        rows = [tuple(col[r] for col in images) for r in range(4 * n * n)]
        return [unrealify(v, n, n) for v in nullspace(rows, 4 * n * n)]

    def graded_basis(self):
        n = self.n
        basis = {
            -2: [AmbientElement(self.form, c=1).assemble()],
            -1: [self.embed_minus1(X) for X in real_basis(n, 1)],
            0: [AmbientElement(self.form, a=u).assemble() for u in UNITS]
            + [AmbientElement(self.form, A=A).assemble() for A in self.so_star_basis],
            1: [self.embed_plus1(Y) for Y in real_basis(n, 1)],
            2: [AmbientElement(self.form, d=1).assemble()],
        }
        log_debug(self.logger, f"graded basis sizes for n={n}: {[len(basis[g]) for g in GRADES]}")
        return basis

    def ambient_basis(self):
        """(grade, matrix) pairs spanning so*(2n+4), lowest grade first"""
        basis = self.graded_basis()
        return [(grade, M) for grade in GRADES for M in basis[grade]]

    # coordinates

    def coords(self, M):
        return realify_sparse(M)

    def matrix(self, coords):
        return unrealify_sparse(coords, self.size, self.size)

    def bracket(self, u, v):
        """Commutator on sparse realified coordinates"""
        return realify_sparse(commutator(self.matrix(u), self.matrix(v)))

    # forms on g_{-1}

    def levi_form(self, X, Y):
        """g_{-2} coefficient of [X~(X), X~(Y)]; equals 2 Re(Y* jj X)"""
        X, Y = as_column(X), as_column(Y)
        if X.rows != self.n or Y.rows != self.n:
            raise ShapeError(f"levi_form needs vectors in H^{self.n}")
        bracket = commutator(self.embed_minus1(X), self.embed_minus1(Y))
        return bracket[self.size - 1, 0].w

    def pseudo_hermitian_metrics(self, C, X):
        """i, j, k components of (C* jj X + X* jj C) / 2"""
        C, X = as_column(C), as_column(X)
        if C.rows != self.n or X.rows != self.n:
            raise ShapeError(f"metrics need vectors in H^{self.n}")
        jj = self.form.matrix
        total = conj_transpose(C).matmul(jj).matmul(X) + conj_transpose(X).matmul(jj).matmul(C)
        q = total[0, 0] / 2
        return (q.x, q.y, q.z)

    def levi_gram(self):
        basis = real_basis(self.n, 1)
        return [tuple(self.levi_form(u, v) for v in basis) for u in basis]

    def metric_grams(self):
        basis = real_basis(self.n, 1)
        grams = ([], [], [])
        for u in basis:
            rows = [self.pseudo_hermitian_metrics(u, v) for v in basis]
            for a in range(3):
                grams[a].append(tuple(r[a] for r in rows))
        return grams

    def dimension_report(self):
        basis = self.graded_basis()
        dims = {g: len(basis[g]) for g in GRADES}
        log_info(self.logger, f"so*({2 * self.n + 4}) graded dims {dims}")
        return dims


def right_unit_action(X, unit):
    """X -> X * conj(unit); gives J1 J2 = J3 under composition"""
    return as_column(X).right_scale(unit.conj())

