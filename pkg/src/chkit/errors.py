"""Exception types raised across the package.

Division by zero raises the builtin ZeroDivisionError; everything else
derives from ChkitError so callers (notably the CLI) can map any
domain-level failure to a single exit path.
"""

from __future__ import annotations


class ChkitError(Exception):
    """Base class for all package-specific errors."""


class DimMismatch(ChkitError):
    """Operands live in Hilbert spaces of different dimension."""


class ZeroRay(ChkitError):
    """A ray (nonzero vector) was required but the zero vector was given."""


class NotAProjector(ChkitError):
    """Matrix is not Hermitian idempotent."""


class SumNotIdentity(ChkitError):
    """Candidate decomposition cells do not sum to the identity."""


class NotOrthogonal(ChkitError):
    """Two candidate decomposition cells have a nonzero product."""

    def __init__(self, j: int, k: int):
        super().__init__(f"cells {j} and {k} are not orthogonal")
        self.j = j
        self.k = k


class ZeroCell(ChkitError):
    """A decomposition cell is the zero projector."""

    def __init__(self, j: int):
        super().__init__(f"cell {j} is the zero projector")
        self.j = j


class AlgebraMismatch(ChkitError):
    """Events or truth functionals from different algebras were combined."""


class OracleTooLarge(ChkitError):
    """Brute-force enumeration requested beyond its supported size."""


class ZeroProbabilityCondition(ChkitError):
    """Conditioning on a cell of probability zero."""


class UnknownPoint(ChkitError):
    """Point id not present in the phase space."""


class InvalidPartition(ChkitError):
    """Cells do not form a partition of the phase space."""


class IncompatibleFrameworks(ChkitError):
    """Frameworks whose projectors do not all commute cannot be combined."""

    def __init__(self, label1: str, label2: str):
        super().__init__(f"frameworks {label1!r} and {label2!r} are incompatible")
        self.label1 = label1
        self.label2 = label2


class NotARefinement(ChkitError):
    """The claimed fine framework does not refine the coarse one."""


class NotInFramework(ChkitError):
    """Referenced cell index does not belong to the framework."""


class AmbiguousRefinement(ChkitError):
    """Refining a true coarse cell left several candidate fine cells."""


class NoAssertedTruth(ChkitError):
    """Session queried for a truth value before any cell was asserted."""


class InconsistentFamily(ChkitError):
    """Truth-assignment family fails the every-framework agreement check."""


class ContextNotABasis(ChkitError):
    """A ray-set context is not an orthogonal basis."""

    def __init__(self, index: int, reason: str = ""):
        detail = f": {reason}" if reason else ""
        super().__init__(f"context {index} is not an orthogonal basis{detail}")
        self.index = index


class DuplicateRayConflict(ChkitError):
    """Merging projectively equal rays left a context with a repeated ray."""


class UnknownDataset(ChkitError):
    """No built-in dataset with the given name."""


class UnknownDemo(ChkitError):
    """No demo with the given name."""


class ParseError(ChkitError):
    """Input file or literal does not match its schema."""


class SnapError(ParseError):
    """Float value could not be snapped to an exact field element."""
