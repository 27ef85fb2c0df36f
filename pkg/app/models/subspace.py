# app/models/subspace.py
"""
Real-linear subspaces of a rational coordinate space.

Row reduction, rank and kernels are delegated to sympy's ``DomainMatrix``
over ``QQ`` in sparse format. Vectors cross the boundary as tuples of
``Fraction``; a subspace keeps its basis in reduced row echelon form so two
subspaces are equal iff their bases are equal.
"""

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from models.errors import ShapeError


def _qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _frac(element):
    return Fraction(int(element.numerator), int(element.denominator))


def to_domain_matrix(rows, ncols):
    """Sparse DomainMatrix from dense vectors or {index: value} dicts"""
    dod = {}
    for i, row in enumerate(rows):
        items = row.items() if isinstance(row, dict) else enumerate(row)
        entries = {j: _qq(v) for j, v in items if v}
        if entries:
            dod[i] = entries
    return DomainMatrix(dod, (len(rows), ncols), QQ)


def from_domain_matrix(matrix):
    """Dense list of Fraction tuples"""
    nrows, ncols = matrix.shape
    dod = matrix.to_sparse().to_dod()
    out = []
    for i in range(nrows):
        row = [Fraction(0)] * ncols
        for j, v in dod.get(i, {}).items():
            row[j] = _frac(v)
        out.append(tuple(row))
    return out


def rref(rows, ncols):
    """Nonzero rows of the reduced row echelon form and their pivot columns"""
    if not rows:
        return [], ()
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    dense = from_domain_matrix(reduced)
    return dense[:len(pivots)], tuple(pivots)


def rank(rows, ncols):
    if not rows:
        return 0
    return to_domain_matrix(rows, ncols).rank()


def nullspace(rows, ncols):
    """Basis (as rows) of {v : M v = 0}"""
    if ncols == 0:
        return []
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    kernel = to_domain_matrix(rows, ncols).nullspace()
    if kernel.shape[0] == 0:
        return []
    return from_domain_matrix(kernel)


def solve(columns, target):
    """
    One solution z of sum_k z_k columns[k] = target, or None.

    Args:
        columns: list of equal-length rational vectors
        target: rational vector of the same length

    Returns:
        tuple of Fractions, or None when the system is inconsistent
    """
    length = len(target)
    if not columns:
        return () if not any(target) else None
    augmented = [
        tuple(col[r] for col in columns) + (target[r],)
        for r in range(length)
    ]
    width = len(columns) + 1
    reduced, pivots = rref(augmented, width)
    if width - 1 in pivots:
        return None
    solution = [Fraction(0)] * len(columns)
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[-1]
    return tuple(solution)


def densify(v, dim):
    if isinstance(v, dict):
        out = [Fraction(0)] * dim
        for k, c in v.items():
            out[k] = Fraction(c)
        return tuple(out)
    return tuple(Fraction(c) for c in v)


def as_sparse(v):
    if isinstance(v, dict):
        return {k: Fraction(c) for k, c in v.items() if c}
    return {k: Fraction(c) for k, c in enumerate(v) if c}


def sparse_axpy(acc, v, scale):
    """acc += scale * v in place for {index: Fraction} vectors"""
    for k, c in v.items():
        value = acc.get(k, 0) + scale * c
        if value:
            acc[k] = value
        else:
            acc.pop(k, None)
    return acc


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple
    pivots: tuple = ()

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    @cached_property
    def sparse_basis(self):
        return tuple(as_sparse(row) for row in self.basis)

    @cached_property
    def _pivot_row(self):
        return {p: r for r, p in enumerate(self.pivots)}

    def _check_length(self, v):
        if not isinstance(v, dict) and len(v) != self.ambient_dim:
            raise ShapeError(f"vector of length {len(v)} in a {self.ambient_dim}-dimensional space")

    def contains(self, v):
        return self.residual(v) is None

    def residual(self, v):
        """None if v lies in the subspace, otherwise v minus its pivot projection (sparse)"""
        self._check_length(v)
        v = as_sparse(v)
        rest = dict(v)
        for p, r in self._pivot_row.items():
            c = v.get(p)
            if c:
                sparse_axpy(rest, self.sparse_basis[r], -c)
        return rest or None

    def coordinates(self, v):
        """Coefficients of v against the reduced basis"""
        if self.residual(v) is not None:
            raise ValueError("vector is not in the subspace")
        v = as_sparse(v)
        return tuple(v.get(p, Fraction(0)) for p in self.pivots)

    def combine(self, coefficients):
        return densify(self.combine_sparse(coefficients), self.ambient_dim)

    def combine_sparse(self, coefficients):
        out = {}
        for c, row in zip(coefficients, self.sparse_basis):
            if c:
                sparse_axpy(out, row, c)
        return out

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("subspaces live in different ambient spaces")
        return span(list(self.basis) + list(other.basis), self.ambient_dim)

    def annihilator(self):
        """Rows w with w.v = 0 for every v in the subspace"""
        return nullspace(list(self.basis), self.ambient_dim)

    def intersect(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("subspaces live in different ambient spaces")
        if self.is_zero() or other.is_zero():
            return zero_subspace(self.ambient_dim)
        # x = sum a_r u_r with W x = 0 where W annihilates other
        constraints = other.annihilator()
        if not constraints:
            return self
        coeff_rows = [
            tuple(sum((w[k] * c for k, c in u.items()), Fraction(0)) for u in self.sparse_basis)
            for w in constraints
        ]
        kernel = nullspace(coeff_rows, self.dim)
        return span([self.combine(a) for a in kernel], self.ambient_dim)

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[str(c) for c in row] for row in self.basis],
        }


def zero_subspace(ambient_dim):
    return Subspace(ambient_dim, (), ())


def span(vectors, ambient_dim=None):
    """Reduced basis of the linear hull of the given vectors"""
    vectors = list(vectors)
    if ambient_dim is None:
        if not vectors:
            raise ShapeError("ambient dimension is required for an empty span")
        first = vectors[0]
        if isinstance(first, dict):
            raise ShapeError("ambient dimension is required for sparse vectors")
        ambient_dim = len(first)
    for v in vectors:
        if not isinstance(v, dict) and len(v) != ambient_dim:
            raise ShapeError(f"mixed ambient dimensions: {len(v)} vs {ambient_dim}")
    reduced, pivots = rref(vectors, ambient_dim)
    return Subspace(ambient_dim, tuple(reduced), pivots)


def full_space(ambient_dim):
    return span(
        [tuple(Fraction(int(i == j)) for j in range(ambient_dim)) for i in range(ambient_dim)],
        ambient_dim,
    )
