# app/models/__init__.py
"""
Models package for exact algebraic data structures.

This package contains:
- Quaternions and quaternionic matrices over the rationals
- Real subspaces with reduced bases (sympy DomainMatrix over QQ)
- Lie algebras given by structure constants, quotients and radicals
- Domain exceptions

Features:
- Exact arithmetic only, no floating point
- Sparse storage of matrices and structure constants
"""

from .errors import TilaError
from .presentation import LiePresentation, quotient_presentation
from .quatlin import QMat, Quat
from .subspace import Subspace, span

__all__ = ["LiePresentation", "QMat", "Quat", "Subspace", "TilaError", "quotient_presentation", "span"]

# Version info
__version__ = "1.0.0"
