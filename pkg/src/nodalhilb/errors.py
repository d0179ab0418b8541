"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class NodalHilbError(Exception):
    """Base class for every error raised by this package."""


class ContextError(NodalHilbError, ValueError):
    """Operands live in different variable contexts, or a name is undeclared."""


class ShapeError(NodalHilbError, ValueError):
    pass


class RangeError(NodalHilbError, ValueError):
    pass


class InvalidBinding(NodalHilbError, ValueError):
    pass


class PreconditionError(NodalHilbError, ValueError):
    pass


class ParseError(NodalHilbError, ValueError):
    pass


class BudgetError(NodalHilbError, RuntimeError):
    """A configurable step budget was exhausted before the computation finished.

    Distinct from a mathematical failure: callers report it as *skipped*.
    """


class ModelError(NodalHilbError, RuntimeError):
    """The explicit local model is inconsistent (implementation or convention fault)."""


class RelationFailure(NodalHilbError, AssertionError):
    """An identity that should hold exactly was found to fail."""
