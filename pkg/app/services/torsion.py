# app/services/torsion.py
"""
Generators with C != 0: the torsion functional, the forcing argument C = 0
for symmetric generators, and the solvable subalgebra spanned by a complement.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from logger_config import get_logger, log_error, log_info, log_success
from models.errors import BracketOffLineError, NotAMemberError
from models.presentation import bracket_closure, derived_series, quotient_presentation
from models.quatlin import commutator, real_basis
from models.subspace import rank, span
from services.sostar import SkewForm, SoStar, as_column


@dataclass(frozen=True)
class LiftedComplement:
    """A real-linear family X -> X~(X) of ambient elements with g_{-1} part X"""

    form: SkewForm
    lift: Callable
    name: str = ""

    @property
    def n(self):
        return self.form.n

    def element(self, X):
        return self.lift(as_column(X))

    def basis(self):
        return [self.lift(X) for X in real_basis(self.n, 1)]

    def coordinates(self):
        so = SoStar(self.form)
        return [so.coords(M) for M in self.basis()]

    def bottom_left_is_zero(self):
        last = self.n + 1
        return all(M[last, 0].is_zero() for M in self.basis())


@dataclass(frozen=True)
class TorsionFunctional:
    """lambda(X) = sum_b coefficients[b] x_b over the real basis of H^n"""

    coefficients: tuple

    def __call__(self, X):
        X = as_column(X)
        total = Fraction(0)
        index = 0
        for i in range(X.rows):
            for c in X[i, 0].components():
                total += self.coefficients[index] * c
                index += 1
        return total

    def is_zero(self):
        return not any(self.coefficients)

    def to_json(self):
        return [str(c) for c in self.coefficients]


def torsion_coefficient(tauhat, complement):
    """
    Decompose [tauhat, X~(e_b)] along the line of tauhat for every basis vector.

    Args:
        tauhat: TauElement, C may be nonzero
        complement: LiftedComplement

    Returns:
        TorsionFunctional with the coefficient halved

    Raises:
        NotAMemberError: a basis element is not in so*(2n+4)
        BracketOffLineError: first basis vector whose bracket leaves R tauhat
    """
    so = SoStar(tauhat.form)
    T = tauhat.assemble()
    last = tauhat.n + 1
    coefficients = []
    for index, M in enumerate(complement.basis()):
        if not so.ambient_membership(M):
            raise NotAMemberError(f"complement basis element {index} is not in so*(2n+4)")
        bracket = commutator(T, M)
        # tauhat has 1 at (last, first)
        c = bracket[last, 0].w
        residual = bracket - T * c
        if not residual.is_zero():
            raise BracketOffLineError(index, residual)
        coefficients.append(c / 2)
    return TorsionFunctional(tuple(coefficients))


def metric_witness(form, C):
    """First (a, basis index, value) with g_a(C, e) != 0, or None when C = 0"""
    so = SoStar(form)
    C = as_column(C)
    for index, e in enumerate(real_basis(form.n, 1)):
        values = so.pseudo_hermitian_metrics(C, e)
        for a, value in enumerate(values, start=1):
            if value:
                return a, index, value
    return None


def symmetric_forcing_check(form, C=None):
    """
    True iff g_1(C, .) = g_2(C, .) = g_3(C, .) = 0 forces C = 0.

    The three Gram matrices are stacked into a 12n x 4n system in the
    coordinates of C; the implication holds iff it has rank 4n.
    """
    if C is not None and as_column(C).is_zero():
        return True
    so = SoStar(form)
    grams = so.metric_grams()
    dim = 4 * form.n
    rows = []
    for gram in grams:
        for v in range(dim):
            rows.append(tuple(gram[u][v] for u in range(dim)))
    return rank(rows, dim) == dim


@dataclass(frozen=True)
class SolvableReport:
    closure_dim: int
    solvable: bool
    derived_dims: tuple

    def to_json(self):
        return {"closure_dim": self.closure_dim, "solvable": self.solvable, "derived_dims": list(self.derived_dims)}


def solvable_subalgebra_report(tauhat, complement):
    """Closure of the complement plus R tauhat, modulo R tauhat"""
    so = SoStar(tauhat.form)
    tau_coords = so.coords(tauhat.assemble())
    generators = span(complement.coordinates() + [tau_coords], so.ambient_dim)
    S = bracket_closure(generators, so.bracket)
    line = span([tau_coords], so.ambient_dim)
    P = quotient_presentation(S, line, so.bracket).presentation
    series = derived_series(P)
    return SolvableReport(P.dim, series[-1].is_zero(), tuple(U.dim for U in series))


class TorsionService:
    """Runs the torsion checks for a generator and its lifted complement"""

    def __init__(self):
        self.logger = get_logger("torsion")

    def report(self, tauhat, complement):
        """
        Report dict with lambda, on-line flag, closure dimension and solvability.

        Off-line brackets are reported, not raised; the closure is skipped then.
        """
        try:
            log_info(self.logger, f"torsion report for {complement.name or 'complement'}")
            start_time = time.time()
            result = {"n": tauhat.n, "on_line": True, "lambda": None, "off_line_index": None}
            try:
                functional = torsion_coefficient(tauhat, complement)
                result["lambda"] = functional.to_json()
            except BracketOffLineError as e:
                result["on_line"] = False
                result["off_line_index"] = e.index
            if result["on_line"]:
                closure = solvable_subalgebra_report(tauhat, complement)
                result.update(closure.to_json())
            else:
                result.update(closure_dim=None, solvable=None, derived_dims=[])
            result["forcing_check"] = symmetric_forcing_check(tauhat.form, tauhat.C)
            witness = metric_witness(tauhat.form, tauhat.C)
            result["metric_witness"] = None if witness is None else {
                "metric": witness[0],
                "basis": witness[1],
                "value": str(witness[2]),
            }
            log_success(self.logger, f"torsion report completed in {time.time() - start_time:.2f}s")
            return result
        except Exception as e:
            log_error(self.logger, f"torsion report failed: {str(e)}")
            raise
