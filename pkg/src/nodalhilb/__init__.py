"""Exact computer algebra for Hilbert schemes of points on families of nodal curves."""

from .arith import Frac, Poly, Ring, TLaurent, determinant, elementary_symmetric, substitute, t_order
from .errors import (
    BudgetError,
    ContextError,
    InvalidBinding,
    ModelError,
    NodalHilbError,
    ParseError,
    PreconditionError,
    RangeError,
    RelationFailure,
    ShapeError,
)
from .groebner import GroebnerBasis, IdealBasis, MonomialOrder, buchberger, quotient_basis

__version__ = "0.1.0"
