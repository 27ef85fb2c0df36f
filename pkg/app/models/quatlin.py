# app/models/quatlin.py
"""
Exact quaternion and quaternionic-matrix arithmetic.

Scalars are ``fractions.Fraction``. A quaternion is w + x i + y j + z k and a
quaternionic matrix stores its entries row-major. ``realify`` identifies an
r x c quaternionic matrix with a rational vector of length 4rc using the
basis (1, i, j, k) per entry.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

from models.errors import ShapeError


def to_fraction(value):
    """Coerce ints, Fractions and "p/q" strings into a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def fraction_str(value):
    return str(to_fraction(value))


@dataclass(frozen=True)
class Quat:
    w: Fraction = Fraction(0)
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @classmethod
    def real(cls, value):
        return cls(value, 0, 0, 0)

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, Quat) else cls.real(value)

    def components(self):
        return (self.w, self.x, self.y, self.z)

    def is_zero(self):
        return not (self.w or self.x or self.y or self.z)

    def is_real(self):
        return not (self.x or self.y or self.z)

    def is_imaginary(self):
        return self.w == 0

    def conj(self):
        return Quat(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def re(self):
        return self.w

    def im(self):
        return Quat(0, self.x, self.y, self.z)

    def inverse(self):
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quat(c.w / n, c.x / n, c.y / n, c.z / n)

    def __add__(self, other):
        other = Quat.coerce(other)
        return Quat(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = Quat.coerce(other)
        return Quat(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return Quat.coerce(other) - self

    def __neg__(self):
        return Quat(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quat):
            return quat_mul(self, other)
        if isinstance(other, (int, Rational)):
            s = to_fraction(other)
            return Quat(self.w * s, self.x * s, self.y * s, self.z * s)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / to_fraction(other))
        return NotImplemented

    def to_json(self):
        return [fraction_str(c) for c in self.components()]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, (list, tuple)) or len(data) != 4:
            raise ValueError("quaternion JSON must be a list of four rational strings")
        return cls(*(to_fraction(c) for c in data))

    def __str__(self):
        terms = [f"{c}{u}" for c, u in zip(self.components(), ("", "i", "j", "k")) if c]
        return " + ".join(terms) if terms else "0"


ZERO = Quat()
ONE = Quat(1, 0, 0, 0)
I = Quat(0, 1, 0, 0)
J = Quat(0, 0, 1, 0)
K = Quat(0, 0, 0, 1)
UNITS = (ONE, I, J, K)
IMAGINARY_UNITS = (I, J, K)


def quat_mul(p, q):
    """Hamilton product with ij = k, jk = i, ki = j"""
    return Quat(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


@dataclass(frozen=True)
class QMat:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("matrix shape must be non-negative")
        entries = tuple(Quat.coerce(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ShapeError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    # construction

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls.diag([ONE] * n)

    @classmethod
    def scalar(cls, n, q):
        return cls.diag([Quat.coerce(q)] * n)

    @classmethod
    def diag(cls, values):
        values = [Quat.coerce(v) for v in values]
        n = len(values)
        return cls.from_sparse(n, n, {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        return cls(len(rows), width, tuple(Quat.coerce(e) for r in rows for e in r))

    @classmethod
    def column(cls, values):
        values = [Quat.coerce(v) for v in values]
        return cls(len(values), 1, tuple(values))

    @classmethod
    def row(cls, values):
        values = [Quat.coerce(v) for v in values]
        return cls(1, len(values), tuple(values))

    @classmethod
    def from_sparse(cls, rows, cols, items):
        entries = [ZERO] * (rows * cols)
        for (i, j), q in items.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            entries[i * cols + j] = Quat.coerce(q)
        return cls(rows, cols, tuple(entries))

    @classmethod
    def block(cls, row_sizes, col_sizes, blocks):
        """Assemble from a dict {(block_row, block_col): QMat}; missing blocks are zero"""
        row_offsets = _offsets(row_sizes)
        col_offsets = _offsets(col_sizes)
        items = {}
        for (bi, bj), sub in blocks.items():
            if sub.rows != row_sizes[bi] or sub.cols != col_sizes[bj]:
                raise ShapeError(
                    f"block ({bi}, {bj}) is {sub.rows}x{sub.cols}, "
                    f"expected {row_sizes[bi]}x{col_sizes[bj]}"
                )
            for (i, j), q in sub.nonzero.items():
                items[(row_offsets[bi] + i, col_offsets[bj] + j)] = q
        return cls.from_sparse(sum(row_sizes), sum(col_sizes), items)

    # access

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    @cached_property
    def nonzero(self):
        """Nonzero entries as {(i, j): Quat}"""
        return {
            (idx // self.cols, idx % self.cols): q
            for idx, q in enumerate(self.entries)
            if not q.is_zero()
        }

    @cached_property
    def _rows_index(self):
        by_row = {}
        for (i, j), q in self.nonzero.items():
            by_row.setdefault(i, []).append((j, q))
        return by_row

    def is_zero(self):
        return not self.nonzero

    def submatrix(self, r0, r1, c0, c1):
        return QMat.from_sparse(
            r1 - r0,
            c1 - c0,
            {(i - r0, j - c0): q for (i, j), q in self.nonzero.items() if r0 <= i < r1 and c0 <= j < c1},
        )

    def to_rows(self):
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    # arithmetic

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same_shape(other)
        return QMat(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._check_same_shape(other)
        return QMat(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return QMat(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, QMat):
            return self.matmul(other)
        if isinstance(other, (int, Rational)):
            s = to_fraction(other)
            return QMat(self.rows, self.cols, tuple(a * s for a in self.entries))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self * other
        return NotImplemented

    def __matmul__(self, other):
        return self.matmul(other)

    def matmul(self, other):
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        acc = {}
        other_rows = other._rows_index
        for (i, k), p in self.nonzero.items():
            for j, q in other_rows.get(k, ()):
                key = (i, j)
                prod = quat_mul(p, q)
                acc[key] = acc[key] + prod if key in acc else prod
        return QMat.from_sparse(self.rows, other.cols, acc)

    def left_scale(self, q):
        """q * M entrywise"""
        q = Quat.coerce(q)
        return QMat(self.rows, self.cols, tuple(quat_mul(q, a) for a in self.entries))

    def right_scale(self, q):
        """M * q entrywise"""
        q = Quat.coerce(q)
        return QMat(self.rows, self.cols, tuple(quat_mul(a, q) for a in self.entries))

    # serialization

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [q.to_json() for q in self.entries],
        }

    @classmethod
    def from_json(cls, data):
        try:
            rows, cols = int(data["rows"]), int(data["cols"])
            entries = tuple(Quat.from_json(e) for e in data["entries"])
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed matrix JSON: {e}") from e
        return cls(rows, cols, entries)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(q) for q in row) + "]" for row in self.to_rows())


def _offsets(sizes):
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def conj_transpose(m):
    return QMat.from_sparse(m.cols, m.rows, {(j, i): q.conj() for (i, j), q in m.nonzero.items()})


def real_trace(m):
    """Trace of M as a real-linear map: 4 Re(sum of the diagonal)"""
    if not m.is_square:
        raise ShapeError(f"real_trace needs a square matrix, got {m.shape}")
    return 4 * sum((m[i, i].w for i in range(m.rows)), Fraction(0))


def commutator(m, n):
    if not (m.is_square and n.is_square) or m.shape != n.shape:
        raise ShapeError(f"commutator needs square matrices of equal size, got {m.shape} and {n.shape}")
    return m.matmul(n) - n.matmul(m)


def realify(m):
    """Rational coordinate vector of length 4*rows*cols, basis (1, i, j, k) per entry"""
    out = []
    for q in m.entries:
        out.extend(q.components())
    return tuple(out)


def unrealify(vector, rows, cols):
    if len(vector) != 4 * rows * cols:
        raise ShapeError(f"vector of length {len(vector)} does not realify a {rows}x{cols} matrix")
    return QMat(
        rows,
        cols,
        tuple(Quat(*vector[4 * t:4 * t + 4]) for t in range(rows * cols)),
    )


def realify_sparse(m):
    """Nonzero coordinates of realify(m) as {index: Fraction}"""
    out = {}
    for (i, j), q in m.nonzero.items():
        base = 4 * (i * m.cols + j)
        for offset, c in enumerate(q.components()):
            if c:
                out[base + offset] = c
    return out


def unrealify_sparse(coords, rows, cols):
    items = {}
    for index, c in coords.items():
        if not c:
            continue
        entry, offset = divmod(index, 4)
        key = divmod(entry, cols)
        comps = list(items.get(key, ZERO).components())
        comps[offset] += c
        items[key] = Quat(*comps)
    return QMat.from_sparse(rows, cols, items)


def real_basis(rows, cols):
    """Real basis of quaternionic r x c matrices in realify order"""
    basis = []
    for entry in range(rows * cols):
        i, j = divmod(entry, cols)
        for unit in UNITS:
            basis.append(QMat.from_sparse(rows, cols, {(i, j): unit}))
    return basis
