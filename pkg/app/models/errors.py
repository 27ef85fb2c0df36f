# app/models/errors.py
"""Exceptions raised by the algebra and service layers."""


class TilaError(Exception):
    """Base class for every error raised by the workbench"""


class ShapeError(TilaError, ValueError):
    """Matrix or vector dimensions do not fit the operation"""


class NotAMemberError(TilaError, ValueError):
    """Matrix is not an element of the ambient algebra"""


class NotContainedError(TilaError):
    def __init__(self, message="T not contained in S"):
        super().__init__(message)


class NotAnIdealError(TilaError):
    def __init__(self, message="not an ideal of S"):
        super().__init__(message)


class RadicalNotSolvableError(TilaError):
    def __init__(self, message="radical not solvable"):
        super().__init__(message)


class SymtestFailedError(TilaError):
    def __init__(self, residuals=None):
        self.residuals = residuals or []
        super().__init__(f"symtest failed ({len(self.residuals)} nonzero residuals)")


class GradingViolatedError(TilaError):
    def __init__(self, message="grading violated: [[m,m],m] is not contained in m"):
        super().__init__(message)


class QuotientIllDefinedError(TilaError):
    def __init__(self, message="quotient ill-defined: [S, tau] != 0"):
        super().__init__(message)


class CatalogConstraintError(TilaError, ValueError):
    """Tag parameters violate the admissibility constraints"""

    def __init__(self, tag, inequality):
        self.tag = tag
        self.inequality = inequality
        super().__init__(f"{tag}: violated constraint {inequality}")


class UnknownFamilyError(TilaError, ValueError):
    pass


class BracketOffLineError(TilaError):
    """A bracket [tauhat, m_i] leaves the line spanned by tauhat"""

    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__(f"bracket off-line at m-basis vector {index}")


class NormalizationError(TilaError):
    pass


class ReportParseError(TilaError, ValueError):
    pass
