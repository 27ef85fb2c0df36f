# app/models/presentation.py
"""
Finite-dimensional Lie algebras given by structure constants.

``LiePresentation`` stores [b_i, b_j] = sum_k c[i][j][k] b_k sparsely as
{(i, j): {k: c}} for i != j. The helpers here build presentations from
bracket-closed subspaces of a matrix algebra (``bracket_closure``,
``quotient_presentation``) and compute the Killing form, the solvable
radical (Cartan's criterion), derived series, centralizers and the largest
ideal inside a subspace.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from models.errors import (
    NotAnIdealError,
    NotContainedError,
    RadicalNotSolvableError,
    ShapeError,
)
from models.subspace import (
    Subspace,
    as_sparse,
    densify,
    full_space,
    nullspace,
    rank,
    span,
    sparse_axpy,
    zero_subspace,
)


@dataclass(frozen=True, eq=False)
class LiePresentation:
    dim: int
    brackets: dict = field(default_factory=dict)
    labels: tuple = ()

    def basis_bracket(self, i, j):
        """[b_i, b_j] as a sparse {k: c} dict"""
        return self.brackets.get((i, j), {})

    def constant(self, i, j, k):
        return self.basis_bracket(i, j).get(k, Fraction(0))

    def bracket_sparse(self, x, y):
        x, y = as_sparse(x), as_sparse(y)
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                if i != j:
                    sparse_axpy(out, self.basis_bracket(i, j), a * b)
        return out

    def bracket(self, x, y):
        return densify(self.bracket_sparse(x, y), self.dim)

    def ad_sparse(self, i):
        """ad(b_i) as {(k, j): c} with ad(b_i) b_j = sum_k c b_k"""
        out = {}
        for j in range(self.dim):
            for k, c in self.basis_bracket(i, j).items():
                out[(k, j)] = c
        return out

    def ad_rows(self, x):
        """Dense matrix rows of ad(x)"""
        x = as_sparse(x)
        rows = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for i, a in x.items():
            for (k, j), c in self._ad[i].items():
                rows[k][j] += a * c
        return [tuple(r) for r in rows]

    @cached_property
    def _ad(self):
        return [self.ad_sparse(i) for i in range(self.dim)]

    def is_abelian(self):
        return not any(self.brackets.values())

    def is_antisymmetric(self):
        for (i, j), value in self.brackets.items():
            mirrored = self.basis_bracket(j, i)
            keys = set(value) | set(mirrored)
            if any(value.get(k, 0) + mirrored.get(k, 0) for k in keys):
                return False
        return True

    def satisfies_jacobi(self):
        for i, j, k in combinations(range(self.dim), 3):
            total = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.basis_bracket(a, b)
                sparse_axpy(total, self.bracket_sparse(inner, {c: Fraction(1)}), Fraction(1))
            if total:
                return False
        return True

    def to_json(self):
        c = [
            [[str(self.constant(i, j, k)) for k in range(self.dim)] for j in range(self.dim)]
            for i in range(self.dim)
        ]
        return {"dim": self.dim, "c": c, "labels": list(self.labels)}

    @classmethod
    def from_pairs(cls, dim, upper, labels=()):
        """Fill both orientations from brackets given for i < j"""
        brackets = {}
        for (i, j), value in upper.items():
            value = {k: Fraction(c) for k, c in value.items() if c}
            if not value:
                continue
            brackets[(i, j)] = value
            brackets[(j, i)] = {k: -c for k, c in value.items()}
        return cls(dim, brackets, tuple(labels))


def bracket_closure(subspace, bracket):
    """
    Smallest bracket-closed subspace containing ``subspace``.

    Args:
        subspace: starting Subspace
        bracket: bilinear map on sparse ambient vectors returning a sparse vector

    Returns:
        Subspace
    """
    current = subspace
    frontier = list(current.sparse_basis)
    while frontier:
        new_vectors = []
        for u in current.sparse_basis:
            for v in frontier:
                w = bracket(u, v)
                if w:
                    new_vectors.append(w)
        grown = span(list(current.basis) + new_vectors, current.ambient_dim)
        if grown.dim == current.dim:
            return current
        frontier = [r for r in (current.residual(w) for w in new_vectors) if r]
        current = grown
    return current


@dataclass(frozen=True, eq=False)
class Quotient:
    """S/T with complement representatives chosen among the reduced rows of S"""

    presentation: LiePresentation
    S: Subspace
    T: Subspace
    complement: tuple
    T_in_S: Subspace

    @property
    def representatives(self):
        return [self.S.sparse_basis[r] for r in self.complement]

    def project(self, v):
        """Coordinates of v + T against the complement basis"""
        coords = dict(enumerate(self.S.coordinates(v)))
        coords = {k: c for k, c in coords.items() if c}
        for row, pivot in zip(self.T_in_S.sparse_basis, self.T_in_S.pivots):
            c = coords.get(pivot)
            if c:
                sparse_axpy(coords, row, -c)
        return tuple(coords.get(r, Fraction(0)) for r in self.complement)

    def lift(self, coefficients):
        out = {}
        for c, row in zip(coefficients, self.representatives):
            if c:
                sparse_axpy(out, row, c)
        return out


def quotient_presentation(S, T, bracket, labels=()):
    """
    Structure constants of S/T.

    Raises:
        NotContainedError: T is not a subspace of S
        NotAnIdealError: [S, T] is not contained in T
    """
    if S.ambient_dim != T.ambient_dim:
        raise ShapeError("S and T live in different ambient spaces")
    if not S.contains_subspace(T):
        raise NotContainedError()
    for s in S.sparse_basis:
        for t in T.sparse_basis:
            w = bracket(s, t)
            if w and not T.contains(w):
                raise NotAnIdealError()

    T_in_S = span([S.coordinates(t) for t in T.basis], S.dim)
    complement = tuple(r for r in range(S.dim) if r not in set(T_in_S.pivots))
    shell = Quotient(LiePresentation(0), S, T, complement, T_in_S)
    reps = shell.representatives
    upper = {}
    for a, b in combinations(range(len(reps)), 2):
        w = bracket(reps[a], reps[b])
        if w:
            upper[(a, b)] = dict(enumerate(shell.project(w)))
    presentation = LiePresentation.from_pairs(len(reps), upper, labels)
    return Quotient(presentation, S, T, complement, T_in_S)


def killing_form(P):
    """B_ij = trace(ad b_i ad b_j) as dense rows"""
    ads = P._ad
    rows = []
    for i in range(P.dim):
        row = []
        for j in range(P.dim):
            if j < i:
                row.append(rows[j][i])
                continue
            ad_j = ads[j]
            row.append(sum((c * ad_j.get((l, k), 0) for (k, l), c in ads[i].items()), Fraction(0)))
        rows.append(row)
    return [tuple(r) for r in rows]


def form_rank(matrix):
    return rank(list(matrix), len(matrix))


def derived_algebra(P, U=None):
    """[U, U] (whole algebra when U is None)"""
    if U is None:
        vectors = [v for v in P.brackets.values()]
        return span(vectors, P.dim)
    basis = U.sparse_basis
    vectors = [P.bracket_sparse(x, y) for x, y in combinations(basis, 2)]
    return span([v for v in vectors if v], P.dim)


def derived_series(P, U=None):
    U = U if U is not None else full_space(P.dim)
    series = [U]
    while not U.is_zero():
        nxt = derived_algebra(P, U)
        if nxt.dim == U.dim:
            break
        series.append(nxt)
        U = nxt
    return series


def is_solvable(P, U=None):
    return derived_series(P, U)[-1].is_zero()


def radical(P):
    """Solvable radical via Cartan's criterion: the Killing-orthogonal of [g, g]"""
    derived = derived_algebra(P)
    if derived.is_zero():
        return full_space(P.dim)
    B = killing_form(P)
    rows = [
        tuple(sum((y[k] * B[k][j] for k in range(P.dim) if y[k]), Fraction(0)) for j in range(P.dim))
        for y in derived.basis
    ]
    result = span(nullspace(rows, P.dim), P.dim)
    if not is_solvable(P, result):
        raise RadicalNotSolvableError()
    return result


def is_ideal(P, U):
    return all(
        U.contains(P.bracket_sparse({i: Fraction(1)}, x))
        for i in range(P.dim)
        for x in U.sparse_basis
    )


def max_ideal_in(P, L):
    """Largest ideal of P inside L: iterate i <- {x in i : [g, x] in i}"""
    current = L
    while not current.is_zero():
        annihilator = current.annihilator()
        if not annihilator:
            return current
        constraints = []
        images = [
            [P.bracket_sparse({i: Fraction(1)}, u) for u in current.sparse_basis]
            for i in range(P.dim)
        ]
        for per_generator in images:
            for w in annihilator:
                constraints.append(tuple(
                    sum((w[k] * c for k, c in image.items()), Fraction(0)) for image in per_generator
                ))
        kernel = nullspace(constraints, current.dim)
        shrunk = span([current.combine(a) for a in kernel], P.dim)
        if shrunk.dim == current.dim:
            return current
        current = shrunk
    return zero_subspace(P.dim)


def centralizer(P, x):
    return span(nullspace(P.ad_rows(x), P.dim), P.dim)


def center(P):
    rows = []
    for i in range(P.dim):
        rows.extend(P.ad_rows({i: Fraction(1)}))
    return span(nullspace(rows, P.dim), P.dim)
