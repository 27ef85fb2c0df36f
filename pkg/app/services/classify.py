# app/services/classify.py
"""
Grid scan over Jordan normal forms of (a, A, d) for symmetric generators.

A is block diagonal with blocks from a small list of families. R(X) = Xd +
2AXa - Xa^2 - A^2X acts blockwise, so a generator exists iff every block
admits the same (a, d). The scan tabulates the admitted (a, d) per block
family over a rational grid, glues blocks with equal (a, d), rescales the
survivors to a canonical form and matches them against the catalog tags.
"""

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import partial
from itertools import product
from multiprocessing import Pool

from tqdm import tqdm

from config import Config
from logger_config import get_logger, log_error, log_info, log_success, log_warning
from models.errors import NormalizationError, UnknownFamilyError
from models.quatlin import I, J, ONE, ZERO, QMat, Quat, conj_transpose, real_basis, realify
from services.catalog import parse_tag
from services.tila import residual_operator

SIZES = {
    "J1_zero": 1,
    "J2_zero": 2,
    "J1_bj": 1,
    "J2_bj": 2,
    "J1_beta_pair": 2,
    "J2_beta_pair": 4,
}
FAMILIES = tuple(SIZES)

# (family, kappa) in canonical order
KINDS = (
    ("J1_zero", 1),
    ("J2_zero", 1),
    ("J2_zero", -1),
    ("J1_bj", 1),
    ("J1_bj", -1),
    ("J2_bj", 1),
    ("J2_bj", -1),
    ("J1_beta_pair", 1),
    ("J2_beta_pair", 1),
)

logger = get_logger("classify")


def rational_sqrt(value):
    """Exact square root of a non-negative rational, or None"""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


@dataclass(frozen=True, order=True)
class NormalForm:
    """
    One Jordan-type block family of A.

    ``param`` is () for the nilpotent families, (b,) for the j-families and
    (Re beta, Im beta) for the beta pairs.
    """

    family: str
    kappa: int = 1
    param: tuple = ()
    multiplicity: int = 1

    def __post_init__(self):
        if self.family not in SIZES:
            raise UnknownFamilyError(f"unknown block family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "param", tuple(Fraction(p) for p in self.param))
        expected = {"J1_bj": 1, "J2_bj": 1, "J1_beta_pair": 2, "J2_beta_pair": 2}.get(self.family, 0)
        if len(self.param) != expected:
            raise ValueError(f"{self.family} takes {expected} parameter(s), got {self.param}")
        if expected == 1 and self.param[0] <= 0:
            raise ValueError(f"{self.family} needs b > 0")
        if expected == 2 and (self.param[0] <= 0 or self.param[1] < 0):
            raise ValueError(f"{self.family} needs Re beta > 0 and Im beta >= 0")
        if self.kappa not in (1, -1):
            raise ValueError("kappa must be +1 or -1")

    @property
    def kind(self):
        return (self.family, self.kappa)

    @property
    def block_size(self):
        return SIZES[self.family]

    @property
    def size(self):
        return self.block_size * self.multiplicity

    @property
    def beta(self):
        r, s = self.param
        return Quat(r, s, 0, 0)

    def block(self):
        """Matrix of a single block"""
        family, kappa = self.family, self.kappa
        if family == "J1_zero":
            return QMat.zeros(1, 1)
        if family == "J2_zero":
            M = QMat.from_rows([[ZERO, ZERO], [ONE, ZERO]])
            return M if kappa == 1 else conj_transpose(M)
        if family == "J1_bj":
            return QMat.scalar(1, J * (kappa * self.param[0]))
        if family == "J2_bj":
            bj = J * self.param[0]
            M = QMat.from_rows([[bj, ZERO], [ONE, bj]])
            return M if kappa == 1 else conj_transpose(M)
        beta = self.beta
        if family == "J1_beta_pair":
            return QMat.diag([beta, -beta.conj()])
        upper = QMat.from_rows([[beta, ZERO], [ONE, beta]])
        lower = conj_transpose(QMat.from_rows([[-beta, ZERO], [ONE, -beta]]))
        return QMat.block([2, 2], [2, 2], {(0, 0): upper, (1, 1): lower})

    def matrix(self):
        block, k = self.block(), self.block_size
        sizes = [k] * self.multiplicity
        return QMat.block(sizes, sizes, {(t, t): block for t in range(self.multiplicity)})

    def scaled(self, factor):
        return replace(self, param=tuple(p * factor for p in self.param))

    def single(self):
        return replace(self, multiplicity=1)

    def __str__(self):
        args = [str(p) for p in self.param]
        if self.family in ("J2_zero", "J1_bj", "J2_bj"):
            args.append("+" if self.kappa == 1 else "-")
        label = f"{self.family}({','.join(args)})" if args else self.family
        return label if self.multiplicity == 1 else f"{label}^{self.multiplicity}"


def collect(blocks):
    """Merge equal blocks into multiplicities and sort"""
    counts = {}
    for b in blocks:
        key = b.single()
        counts[key] = counts.get(key, 0) + b.multiplicity
    return tuple(replace(b, multiplicity=m) for b, m in sorted(counts.items()))


def assemble_A(blocks):
    matrices = [b.matrix() for b in blocks]
    sizes = [M.rows for M in matrices]
    return QMat.block(sizes, sizes, {(t, t): M for t, M in enumerate(matrices)})


def _operator_matrix(A, a, d):
    k = A.rows
    columns = [realify(residual_operator(A, a, d, X)) for X in real_basis(k, 1)]
    return tuple(tuple(col[r] for col in columns) for r in range(4 * k))


def block_residual(family, params, a, d, kappa=1):
    """
    Matrix of R restricted to one block, as a real-linear map.

    Args:
        family: block family name
        params: () / (b,) / (Re beta, Im beta)
        a: imaginary quaternion
        d: rational

    Returns:
        4k x 4k rational rows in the basis (1, i, j, k) per coordinate; zero
        iff the block admits (a, d)
    """
    if family not in SIZES:
        raise UnknownFamilyError(f"unknown block family {family!r}")
    a = Quat.coerce(a)
    if a.w:
        raise ValueError("a must be imaginary")
    block = NormalForm(family, kappa, tuple(params))
    return _operator_matrix(block.block(), a, Fraction(d))


def full_residual_is_zero(blocks, a, d):
    """R on the assembled block-diagonal A vanishes"""
    A = assemble_A(blocks)
    return all(residual_operator(A, Quat.coerce(a), Fraction(d), X).is_zero() for X in real_basis(A.rows, 1))


@dataclass(frozen=True)
class BlockSolutions:
    """(a, d) admitted by one block: d = zero_a_d when a = 0, d = -|a|^2 for a != 0 if nonzero_a"""

    zero_a_d: Fraction = None
    nonzero_a: bool = False

    def admits(self, a, d):
        a = Quat.coerce(a)
        if a.is_zero():
            return self.zero_a_d is not None and Fraction(d) == self.zero_a_d
        return self.nonzero_a and Fraction(d) == -a.norm2()


def block_solutions(block):
    """Closed-form solution set of the block conditions"""
    family = block.family
    if family == "J1_zero":
        return BlockSolutions(Fraction(0), True)
    if family == "J2_zero":
        return BlockSolutions(Fraction(0), False)
    if family == "J1_bj":
        return BlockSolutions(-block.param[0] ** 2, False)
    if family == "J1_beta_pair":
        r, s = block.param
        return BlockSolutions(r * r if s == 0 else None, False)
    return BlockSolutions()


@dataclass(frozen=True)
class ScanGrid:
    height: int = 4
    bound: Fraction = Fraction(2)

    @property
    def values(self):
        """Rationals p/q with q <= height, |p| <= height and |p/q| <= bound"""
        out = set()
        for q in range(1, self.height + 1):
            for p in range(-self.height, self.height + 1):
                v = Fraction(p, q)
                if abs(v) <= self.bound:
                    out.add(v)
        return tuple(sorted(out))

    @property
    def nonnegative(self):
        return tuple(v for v in self.values if v >= 0)

    @property
    def positive(self):
        return tuple(v for v in self.values if v > 0)

    def params_for(self, family):
        if family in ("J1_bj", "J2_bj"):
            return [(b,) for b in self.positive]
        if family in ("J1_beta_pair", "J2_beta_pair"):
            return [(r, s) for r in self.positive for s in self.nonnegative]
        return [()]

    def to_json(self):
        return {"height": self.height, "bound": str(self.bound)}


@dataclass(frozen=True)
class NormalizedForm:
    a: Quat
    d: Fraction
    blocks: tuple

    def sort_key(self):
        return (self.a.components(), self.d, self.blocks)

    def to_json(self):
        return {"a": self.a.to_json(), "d": str(self.d), "blocks": [str(b) for b in self.blocks]}


def normalize(a, blocks, d):
    """
    Canonical representative under a -> c u a u^-1, A -> c A, d -> c^2 d.

    a is rotated to the ray R>=0 i and scaled to i; with a = 0 the leading
    block parameter is scaled to 1, or |d| to 1 when there is none.

    The rotation u acts through diag(u, 1, u) and leaves the blocks of A as
    they are. Only J1_zero blocks admit a != 0, so for a != 0 the blocks only
    change by the rescaling.

    Raises:
        NormalizationError: the required scale is irrational
    """
    a = Quat.coerce(a)
    d = Fraction(d)
    blocks = collect(blocks)
    if not a.is_zero():
        scale = rational_sqrt(a.norm2())
        if scale is None:
            raise NormalizationError(f"|a| = sqrt({a.norm2()}) is irrational")
        return NormalizedForm(I, d / a.norm2(), collect(b.scaled(1 / scale) for b in blocks))
    leading = next((b.param[0] for b in blocks if b.param), None)
    if leading is None:
        if d == 0:
            return NormalizedForm(ZERO, d, blocks)
        leading = rational_sqrt(abs(d))
        if leading is None:
            raise NormalizationError(f"sqrt(|d|) = sqrt({abs(d)}) is irrational")
    return NormalizedForm(ZERO, d / leading ** 2, collect(b.scaled(1 / leading) for b in blocks))


def match_tag(n, form):
    """Catalog tag for a normalized form, or "unmatched" """
    families = {b.family for b in form.blocks}
    a, d = form.a, form.d
    count = {}
    for b in form.blocks:
        count[b.kind] = count.get(b.kind, 0) + b.multiplicity
    if a.is_zero() and d == 0 and families <= {"J1_zero", "J2_zero"}:
        p, q = count.get(("J2_zero", 1), 0), count.get(("J2_zero", -1), 0)
        family = "ns-even" if n % 2 == 0 else "ns-odd"
        return f"{family}:{n},{p},{q}"
    if a == I and d == -1 and families == {"J1_zero"}:
        return f"m1:{n}"
    if a.is_zero() and d == -1 and families == {"J1_bj"} and all(b.param == (1,) for b in form.blocks):
        p, q = count.get(("J1_bj", 1), 0), count.get(("J1_bj", -1), 0)
        return f"m2:{n},{p},{q}"
    if a.is_zero() and d == 1 and families == {"J1_beta_pair"} and all(b.param == (1, 0) for b in form.blocks):
        return f"m3:{n}"
    return "unmatched"


@dataclass(frozen=True)
class ClassOutcome:
    normalized: NormalizedForm
    matched_tag: str

    def to_json(self):
        return {"tag": self.matched_tag, "normalized": self.normalized.to_json()}


def block_multisets(n):
    """Non-decreasing sequences of KINDS whose block sizes sum to n"""
    out = []

    def extend(start, remaining, chosen):
        if remaining == 0:
            out.append(tuple(chosen))
            return
        for index in range(start, len(KINDS)):
            size = SIZES[KINDS[index][0]]
            if size <= remaining:
                extend(index, remaining - size, chosen + [KINDS[index]])

    extend(0, n, [])
    return out


def admissible_table(kind, grid):
    """{(mu, d): [blocks]} for a = mu i over the grid"""
    family, kappa = kind
    d_values = set(grid.values)
    table = {}
    for mu in grid.nonnegative:
        a = I * mu
        for params in grid.params_for(family):
            block = NormalForm(family, kappa, params)
            M = _operator_matrix(block.block(), a, Fraction(0))
            # R = d Id + R_0, so (a, d) works iff R_0 = -d Id
            c = M[0][0]
            scalar = all(
                M[r][s] == (c if r == s else 0) for r in range(len(M)) for s in range(len(M))
            )
            if scalar and -c in d_values:
                table.setdefault((mu, -c), []).append(block)
    return table


def scan_multiset(multiset, tables, n):
    """Survivors of one block multiset, normalized and matched"""
    kinds = sorted(set(multiset))
    keys = set(tables[kinds[0]])
    for kind in kinds[1:]:
        keys &= set(tables[kind])
    outcomes = {}
    for mu, d in sorted(keys):
        options = [tables[kind][(mu, d)] for kind in multiset]
        for choice in product(*options):
            try:
                form = normalize(I * mu, choice, d)
            except NormalizationError as e:
                log_warning(logger, f"skipping survivor: {str(e)}")
                continue
            outcomes[form] = ClassOutcome(form, match_tag(n, form))
    return list(outcomes.values())


@dataclass(frozen=True)
class ScanResult:
    n: int
    grid: ScanGrid
    outcomes: tuple
    multisets_scanned: int = 0
    unmatched: tuple = field(default_factory=tuple)

    @property
    def tags(self):
        return sorted({o.matched_tag for o in self.outcomes})

    def to_json(self):
        return {
            "n": self.n,
            "grid": self.grid.to_json(),
            "multisets_scanned": self.multisets_scanned,
            "outcomes": [o.to_json() for o in self.outcomes],
            "unmatched": [o.to_json() for o in self.unmatched],
        }


class ClassificationScanner:
    """Runs the normal-form scan, optionally across worker processes"""

    def __init__(self, grid=None, workers=None, show_progress=None):
        self.grid = grid or ScanGrid(Config.CLASSIFY_GRID_HEIGHT, Fraction(Config.CLASSIFY_GRID_RANGE))
        self.workers = workers or Config.CLASSIFY_WORKERS
        self.show_progress = Config.SHOW_PROGRESS if show_progress is None else show_progress
        self.logger = get_logger("classify")

    def scan(self, n):
        if n < 2:
            raise ValueError(f"classification needs n > 1, got {n}")
        try:
            log_info(self.logger, f"scanning n={n} over {len(self.grid.values)} grid values")
            start_time = time.time()
            tables = {kind: admissible_table(kind, self.grid) for kind in KINDS if SIZES[kind[0]] <= n}
            multisets = block_multisets(n)
            found = {}
            if self.workers > 1:
                with Pool(self.workers) as pool:
                    pending = [pool.apply_async(scan_multiset, (m, tables, n)) for m in multisets]
                    pool.close()
                    pool.join()
                for job in tqdm(pending, desc="multisets", disable=not self.show_progress):
                    for outcome in job.get():
                        found[outcome.normalized] = outcome
            else:
                work = partial(scan_multiset, tables=tables, n=n)
                for multiset in tqdm(multisets, desc="multisets", disable=not self.show_progress):
                    for outcome in work(multiset):
                        found[outcome.normalized] = outcome
            outcomes = tuple(sorted(found.values(), key=lambda o: (o.matched_tag, o.normalized.sort_key())))
            unmatched = tuple(o for o in outcomes if o.matched_tag == "unmatched")
            if unmatched:
                log_warning(self.logger, f"{len(unmatched)} unmatched survivors at n={n}")
            log_success(self.logger, f"scan of {len(multisets)} multisets completed in {time.time() - start_time:.2f}s")
            return ScanResult(n, self.grid, outcomes, len(multisets), unmatched)
        except Exception as e:
            log_error(self.logger, f"classification scan failed: {str(e)}")
            raise


def classify_scan(n, grid=None, workers=None):
    return ClassificationScanner(grid, workers).scan(n)


def catalog_normal_form(tag):
    """(a, blocks, d) of a catalog generator in block normal form"""
    if isinstance(tag, str):
        tag = parse_tag(tag)
    n, p, q = tag.n, tag.p, tag.q
    if tag.is_non_semisimple:
        blocks = [NormalForm("J2_zero", 1)] * p + [NormalForm("J2_zero", -1)] * q
        blocks += [NormalForm("J1_zero")] * (n - 2 * (p + q))
        return ZERO, collect(blocks), Fraction(0)
    if tag.family == "m1":
        return I, collect([NormalForm("J1_zero")] * n), Fraction(-1)
    if tag.family == "m2":
        blocks = [NormalForm("J1_bj", 1, (1,))] * p + [NormalForm("J1_bj", -1, (1,))] * q
        return ZERO, collect(blocks), Fraction(-1)
    if tag.family == "m3":
        return ZERO, collect([NormalForm("J1_beta_pair", 1, (1, 0))] * (n // 2)), Fraction(1)
    raise UnknownFamilyError(f"{tag.family} has no symmetric normal form")
