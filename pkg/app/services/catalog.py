# app/services/catalog.py
"""
Generators for every classified family of symmetric qs-H transvection algebras.

Tags are written ``ns-even:n,p,q``, ``ns-odd:n,p,q``, ``m1:n``, ``m2:n,p,q``,
``m3:n`` and ``torsion:n``. ``make_case`` returns the generator tau with its
skew-Hermitian form, the labeled block ranges of the non-semisimple families
and the expected dimensions; ``CatalogService`` memoizes the built algebras.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from cachetools import LRUCache

from config import Config
from logger_config import get_logger, log_debug, log_error, log_info
from models.errors import CatalogConstraintError, ReportParseError, UnknownFamilyError
from models.quatlin import I, J, K, ONE, ZERO, QMat, Quat, real_basis
from services.sostar import SkewForm, dim_so_star, signature_diag
from services.tila import TauElement, build_tila, lift
from services.torsion import LiftedComplement

FAMILIES = ("ns-even", "ns-odd", "m1", "m2", "m3", "torsion")
NS_FAMILIES = ("ns-even", "ns-odd")
BLOCK_NAMES = ("first", "p1", "q1", "r1", "mid", "p2", "q2", "r2", "last")

logger = get_logger("catalog")


@dataclass(frozen=True, order=True)
class CatalogTag:
    family: str
    n: int
    p: int = 0
    q: int = 0

    def __str__(self):
        return format_tag(self)

    @property
    def s(self):
        return self.p + self.q

    @property
    def is_non_semisimple(self):
        return self.family in NS_FAMILIES

    @property
    def is_linear_model(self):
        return self.is_non_semisimple and self.s == 0

    def check(self):
        """Raise CatalogConstraintError naming the first violated inequality"""
        n, p, q = self.n, self.p, self.q
        if self.family not in FAMILIES:
            raise UnknownFamilyError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if n < 2:
            raise CatalogConstraintError(str(self), "n > 1")
        if p < 0 or q < 0:
            raise CatalogConstraintError(str(self), "0 <= p, q")
        if self.family == "ns-even":
            if n % 2:
                raise CatalogConstraintError(str(self), "n even")
            if 2 * (p + q) > n:
                raise CatalogConstraintError(str(self), "p + q <= n/2")
        elif self.family == "ns-odd":
            if n % 2 == 0:
                raise CatalogConstraintError(str(self), "n odd")
            if 2 * (p + q) > n - 1:
                raise CatalogConstraintError(str(self), "p + q <= (n-1)/2")
        elif self.family == "m2":
            if p + q != n:
                raise CatalogConstraintError(str(self), "p + q = n")
        elif self.family == "m3":
            if n % 2:
                raise CatalogConstraintError(str(self), "n even")
        elif p or q:
            raise CatalogConstraintError(str(self), "p = q = 0")
        return self


def format_tag(tag):
    if tag.family in ("m1", "m3", "torsion"):
        return f"{tag.family}:{tag.n}"
    return f"{tag.family}:{tag.n},{tag.p},{tag.q}"


def parse_tag(text):
    """
    Parse a tag string such as ``ns-even:2,1,0`` and check its constraints.

    Raises:
        ReportParseError: malformed string
        UnknownFamilyError: family not in the catalog
        CatalogConstraintError: parameters outside the admissible range
    """
    family, sep, params = text.strip().partition(":")
    if not sep:
        raise ReportParseError(f"tag {text!r} has no ':' separator")
    if family not in FAMILIES:
        raise UnknownFamilyError(f"unknown family {family!r}; expected one of {FAMILIES}")
    try:
        values = [int(v) for v in params.split(",")]
    except ValueError:
        raise ReportParseError(f"tag {text!r} has non-integer parameters")
    expected = 1 if family in ("m1", "m3", "torsion") else 3
    if len(values) != expected:
        raise ReportParseError(f"tag {text!r} needs {expected} parameter(s), got {len(values)}")
    return CatalogTag(family, *values).check()


def admissible_tags(n):
    """Every symmetric catalog tag for a given n"""
    tags = []
    if n < 2:
        return tags
    half = n // 2 if n % 2 == 0 else (n - 1) // 2
    family = "ns-even" if n % 2 == 0 else "ns-odd"
    for p in range(half + 1):
        for q in range(half + 1 - p):
            tags.append(CatalogTag(family, n, p, q))
    tags.append(CatalogTag("m1", n))
    for p in range(n, -1, -1):
        tags.append(CatalogTag("m2", n, p, n - p))
    if n % 2 == 0:
        tags.append(CatalogTag("m3", n))
    return tags


def block_sizes(tag):
    """Sizes of (first, p1, q1, r1, mid, p2, q2, r2, last) in the full matrix"""
    n, p, q = tag.n, tag.p, tag.q
    half = n // 2 if tag.family == "ns-even" else (n - 1) // 2
    r = half - (p + q)
    mid = 1 if tag.family == "ns-odd" else 0
    return dict(zip(BLOCK_NAMES, (1, p, q, r, mid, p, q, r, 1)))


def block_ranges(tag):
    """{block name: (start, end)} indices of the full matrix; empty outside the ns families"""
    if not tag.is_non_semisimple:
        return {}
    ranges, start = {}, 0
    for name, size in block_sizes(tag).items():
        ranges[name] = (start, start + size)
        start += size
    return ranges


def _ns_inner_A(tag):
    """I_q from the q2 block to q1 and I_p from the p1 block to p2"""
    ranges = {name: (a - 1, b - 1) for name, (a, b) in block_ranges(tag).items()}
    items = {}
    for row_block, col_block in (("q1", "q2"), ("p2", "p1")):
        (r0, r1), (c0, _) = ranges[row_block], ranges[col_block]
        for k in range(r1 - r0):
            items[(r0 + k, c0 + k)] = ONE
    return QMat.from_sparse(tag.n, tag.n, items)


def make_tau(tag):
    tag.check()
    n = tag.n
    if tag.family == "ns-even":
        return TauElement(SkewForm.darboux_even(n), A=_ns_inner_A(tag))
    if tag.family == "ns-odd":
        return TauElement(SkewForm.darboux_odd(n), A=_ns_inner_A(tag))
    if tag.family == "m1":
        return TauElement(SkewForm.skew_hermitian(n), a=I, d=-1)
    if tag.family == "m2":
        A = signature_diag(tag.p, tag.q).left_scale(J)
        return TauElement(SkewForm.skew_hermitian(n), A=A, d=-1)
    if tag.family == "m3":
        h = n // 2
        A = QMat.diag([ONE] * h + [-ONE] * h)
        return TauElement(SkewForm.darboux_even(n), A=A, d=1)
    raise UnknownFamilyError(f"{tag.family} has no symmetric generator; use torsion_example")


def expected_report(tag):
    """Dimensions and flags the built algebra should have"""
    tag.check()
    n, s = tag.n, tag.s
    report = {"tag": str(tag), "dim_m": 4 * n}
    if tag.is_non_semisimple:
        r_qH = (s + 1) * (2 * s + 1) - 1
        r_deg = 4 * (s + 1) * (n - 2 * s)
        if s == 0:
            dim_g, semisimple = 4 * n, 0
        else:
            dim_g, semisimple = 4 * (s + 1) * (n - s + 1) - 1, (s + 1) * (2 * s + 3)
        # the radical is non-abelian once r_qH and r_deg are both nonzero
        abelian = s == 0 or r_deg == 0
        report.update(
            dim_g=dim_g,
            semisimple_dim=semisimple,
            radical_dim=r_qH + r_deg,
            r_qH_dim=r_qH,
            r_deg_dim=r_deg,
            radical_abelian=abelian,
            killing_degenerate=True,
            semisimple_target={"name": f"sp({tag.p + 1},{tag.q})", "dim": (s + 1) * (2 * s + 3)} if s else None,
        )
    else:
        if tag.family == "m1":
            target = {"name": f"so*({2 * n + 2})", "dim": dim_so_star(n + 1)}
        elif tag.family == "m2":
            target = {"name": f"su({2 + tag.p},{tag.q})", "dim": (n + 2) ** 2 - 1}
        else:
            target = {"name": f"sl({n // 2 + 1},H)", "dim": (n + 2) ** 2 - 1}
        report.update(
            dim_g=target["dim"],
            semisimple_dim=target["dim"],
            radical_dim=0,
            r_qH_dim=None,
            r_deg_dim=None,
            radical_abelian=True,
            killing_degenerate=False,
            semisimple_target=target,
        )
    report["dim_l"] = report["dim_g"] - 4 * n
    return report


@dataclass(frozen=True)
class CatalogCase:
    tag: CatalogTag
    tau: TauElement
    form: SkewForm
    expected: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)


def make_case(tag):
    if isinstance(tag, str):
        tag = parse_tag(tag)
    tau = make_tau(tag)
    return CatalogCase(tag, tau, tau.form, expected_report(tag), block_ranges(tag))


# torsion example


def _torsion_lift(n, X):
    """Displayed complement element with g_{-1} part X = (X1, X2), blocks of size 1, 1, n-1, 1"""
    X1 = X[0, 0]
    X2 = [X[1 + t, 0] for t in range(n - 1)]
    shift = 2 * (X1.x - X1.y)
    c1 = X1.conj()
    last = n + 1
    items = {
        (0, 0): c1 * (K - ONE) + I * shift,
        (0, 1): c1 * 2 + I * c1 * J,
        (0, last): Quat.real(shift),
        (1, 0): X1,
        (1, last): J * X1 * 2 - X1 * I,
        (last, 1): -(c1 * J),
        (last, last): (ONE + K) * X1 + I * shift,
    }
    for t, x in enumerate(X2):
        col = 2 + t
        cx = x.conj()
        items[(0, col)] = I * cx * J
        items[(1, col)] = (I - J) * cx * J
        items[(col, 0)] = x
        items[(col, 1)] = -(x * (ONE + K))
        items[(col, last)] = -(x * I)
        items[(last, col)] = -(cx * J)
    return QMat.from_sparse(n + 2, n + 2, {k: v for k, v in items.items() if not v.is_zero()})


def torsion_tauhat(n):
    """a = i, A = diag(2j, 0), d = 3, C = (2 - 2k, 0, ..., 0)"""
    if n < 2:
        raise CatalogConstraintError(f"torsion:{n}", "n >= 2")
    A = QMat.diag([J * 2] + [ZERO] * (n - 1))
    C = QMat.column([ONE * 2 - K * 2] + [ZERO] * (n - 1))
    return TauElement(SkewForm.skew_hermitian(n), a=I, A=A, d=Fraction(3), C=C)


def torsion_example(n):
    """Generator with C != 0 and its displayed complement"""
    tauhat = torsion_tauhat(n)
    complement = LiftedComplement(tauhat.form, lambda X: _torsion_lift(n, X), name=f"torsion:{n}")
    return tauhat, complement


class CatalogService:
    """Builds catalog algebras with an LRU memo keyed by tag"""

    def __init__(self, cache_size=None):
        self.logger = get_logger("catalog")
        self._cache = LRUCache(maxsize=cache_size or Config.TILA_CACHE_SIZE)

    def case(self, tag):
        return make_case(tag)

    def build(self, tag):
        """
        Case and built algebra for a tag.

        Args:
            tag: CatalogTag or tag string

        Returns:
            (CatalogCase, Tila)
        """
        case = make_case(tag)
        key = str(case.tag)
        if key in self._cache:
            log_debug(self.logger, f"cache hit for {key}")
            return self._cache[key]
        try:
            log_info(self.logger, f"building {key}")
            result = (case, build_tila(case.tau))
        except Exception as e:
            log_error(self.logger, f"building {key} failed: {str(e)}")
            raise
        self._cache[key] = result
        return result

    def list_cases(self, n):
        return [{"tag": str(tag), **expected_report(tag)} for tag in admissible_tags(n)]

    def clear(self):
        self._cache.clear()

    @property
    def cached_tags(self):
        return sorted(self._cache.keys())


def symmetric_complement(case):
    """Lifted complement X -> X~(X) of a symmetric catalog case"""
    return LiftedComplement(case.form, lambda X: lift(case.tau, X), name=str(case.tag))


def generating_basis(case):
    return [symmetric_complement(case).lift(X) for X in real_basis(case.tau.n, 1)]
