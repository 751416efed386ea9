"""Exact finite-dimensional Hilbert-space objects.

Vectors and square matrices over Q(sqrt2, i), projectors (Hermitian
idempotents), and decompositions of the identity: mutually orthogonal
nonzero projectors summing to I, the quantum analog of a sample space.
All checks are exact matrix identities; there is no tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimMismatch,
    NotAProjector,
    NotOrthogonal,
    ParseError,
    SumNotIdentity,
    ZeroCell,
    ZeroRay,
)
from .exactnum import ONE, ZERO, Scalar

ScalarLike = Scalar | int | str | Fraction


@dataclass(frozen=True, slots=True)
class Vector:
    entries: tuple[Scalar, ...]

    @classmethod
    def of(cls, entries: Iterable[ScalarLike]) -> Vector:
        tup = tuple(Scalar.of(e) for e in entries)
        if not tup:
            raise ValueError("vector needs at least one entry")
        return cls(tup)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def scale(self, s: ScalarLike) -> Vector:
        s = Scalar.of(s)
        return Vector(tuple(e * s for e in self.entries))

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def inner(u: Vector, v: Vector) -> Scalar:
    """Inner product, conjugate-linear in the first argument."""
    if u.dim != v.dim:
        raise DimMismatch(f"vectors of dim {u.dim} and {v.dim}")
    acc = ZERO
    for ue, ve in zip(u.entries, v.entries):
        acc = acc + ue.conj() * ve
    return acc


@dataclass(frozen=True, slots=True)
class Matrix:
    entries: tuple[tuple[Scalar, ...], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable[ScalarLike]]) -> Matrix:
        grid = tuple(tuple(Scalar.of(e) for e in row) for row in rows)
        n = len(grid)
        if n == 0 or any(len(row) != n for row in grid):
            raise ValueError("matrix must be square and non-empty")
        return cls(grid)

    @classmethod
    def identity(cls, dim: int) -> Matrix:
        return cls(
            tuple(
                tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)
            )
        )

    @classmethod
    def zeros(cls, dim: int) -> Matrix:
        return cls(tuple(tuple(ZERO for _ in range(dim)) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_dim(other)
        return Matrix(
            tuple(
                tuple(x + y for x, y in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_dim(other)
        return Matrix(
            tuple(
                tuple(x - y for x, y in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_dim(other)
        n = self.dim
        cols = tuple(zip(*other.entries))
        return Matrix(
            tuple(
                tuple(
                    sum(
                        (self.entries[i][k] * cols[j][k] for k in range(n)),
                        start=ZERO,
                    )
                    for j in range(n)
                )
                for i in range(n)
            )
        )

    def scale(self, s: ScalarLike) -> Matrix:
        s = Scalar.of(s)
        return Matrix(tuple(tuple(e * s for e in row) for row in self.entries))

    def dagger(self) -> Matrix:
        return Matrix(tuple(tuple(e.conj() for e in col) for col in zip(*self.entries)))

    def trace(self) -> Scalar:
        acc = ZERO
        for i in range(self.dim):
            acc = acc + self.entries[i][i]
        return acc

    def sort_key(self) -> tuple:
        return tuple(e.sort_key() for row in self.entries for e in row)

    def _check_dim(self, other: Matrix) -> None:
        if self.dim != other.dim:
            raise DimMismatch(f"matrices of dim {self.dim} and {other.dim}")

    def __str__(self) -> str:
        return "\n".join(
            "[" + ", ".join(str(e) for e in row) + "]" for row in self.entries
        )

    def __repr__(self) -> str:
        return f"Matrix(dim={self.dim})"


def trace_product(x: Matrix, y: Matrix) -> Scalar:
    """tr(XY) without forming the product."""
    if x.dim != y.dim:
        raise DimMismatch(f"matrices of dim {x.dim} and {y.dim}")
    acc = ZERO
    for i in range(x.dim):
        for j in range(x.dim):
            acc = acc + x.entries[i][j] * y.entries[j][i]
    return acc


def outer(u: Vector, v: Vector) -> Matrix:
    """The matrix u v^dagger."""
    if u.dim != v.dim:
        raise DimMismatch(f"vectors of dim {u.dim} and {v.dim}")
    conj_v = tuple(e.conj() for e in v.entries)
    return Matrix(tuple(tuple(ue * ve for ve in conj_v) for ue in u.entries))


def is_projector(m: Matrix) -> bool:
    """True iff m is Hermitian and idempotent, exactly."""
    return m == m.dagger() and (m @ m) == m


@dataclass(frozen=True, slots=True)
class Projector:
    """A validated Hermitian idempotent; rank is its exact trace."""

    matrix: Matrix
    rank: int

    @classmethod
    def from_matrix(cls, m: Matrix) -> Projector:
        if not is_projector(m):
            raise NotAProjector("matrix is not Hermitian idempotent")
        return cls(m, m.trace().as_integer())

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def is_zero(self) -> bool:
        return self.rank == 0

    def __repr__(self) -> str:
        return f"Projector(dim={self.dim}, rank={self.rank})"


def projector_from_ray(v: Vector) -> Projector:
    """Rank-1 projector onto span{v}; invariant under rescaling of v."""
    if v.is_zero():
        raise ZeroRay("cannot project onto the zero vector")
    norm = inner(v, v)  # real, nonzero
    inv = norm.reciprocal()
    return Projector(outer(v, v).scale(inv), 1)


def commutes(p: Projector, q: Projector) -> bool:
    if p.dim != q.dim:
        raise DimMismatch(f"projectors of dim {p.dim} and {q.dim}")
    return (p.matrix @ q.matrix) == (q.matrix @ p.matrix)


def complement(p: Projector) -> Projector:
    """The projector I - P (negation of the property P)."""
    return Projector(Matrix.identity(p.dim) - p.matrix, p.dim - p.rank)


def orthogonal(p: Projector, q: Projector) -> bool:
    """True iff PQ = 0.

    For projectors tr(PQ) equals the squared Frobenius norm of PQ, so the
    trace alone decides the product exactly.
    """
    if p.dim != q.dim:
        raise DimMismatch(f"projectors of dim {p.dim} and {q.dim}")
    return trace_product(p.matrix, q.matrix).is_zero()


def leq(p: Projector, q: Projector) -> bool:
    """True iff P <= Q, i.e. QP = PQ = P.

    Equivalent to tr(P(I-Q)) = 0, and tr of a projector product is its
    squared Frobenius norm, so P <= Q iff tr(PQ) = rank P.
    """
    if p.dim != q.dim:
        raise DimMismatch(f"projectors of dim {p.dim} and {q.dim}")
    return trace_product(p.matrix, q.matrix) == Scalar.of(p.rank)


@dataclass(frozen=True)
class DecompositionOfIdentity:
    """Mutually orthogonal nonzero projectors summing to the identity.

    Cells keep their construction order; every 'cell k' reference in the
    package is 1-based into this tuple and no implicit reordering happens.
    """

    dim: int
    cells: tuple[Projector, ...]

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def realize_event(self, mask: frozenset[int]) -> Matrix:
        """Sum of the cells selected by the 1-based index mask."""
        acc = Matrix.zeros(self.dim)
        for k in sorted(mask):
            acc = acc + self.cells[k - 1].matrix
        return acc


def validate_decomposition(
    cells: Sequence[Projector | Matrix],
) -> DecompositionOfIdentity:
    """Check that cells form a decomposition of the identity.

    Raises NotAProjector(j), ZeroCell(j), DimMismatch, SumNotIdentity or
    NotOrthogonal(j, k); indices in errors are 1-based.
    """
    if not cells:
        raise ValueError("decomposition needs at least one cell")
    projs: list[Projector] = []
    for j, cell in enumerate(cells, start=1):
        if isinstance(cell, Matrix):
            try:
                cell = Projector.from_matrix(cell)
            except NotAProjector:
                raise NotAProjector(f"cell {j} is not Hermitian idempotent") from None
        projs.append(cell)
    dim = projs[0].dim
    for j, p in enumerate(projs, start=1):
        if p.dim != dim:
            raise DimMismatch(f"cell {j} has dim {p.dim}, expected {dim}")
        if p.is_zero():
            raise ZeroCell(j)
    total = Matrix.zeros(dim)
    for p in projs:
        total = total + p.matrix
    if total != Matrix.identity(dim):
        raise SumNotIdentity("cells do not sum to the identity")
    for j in range(len(projs)):
        for k in range(j + 1, len(projs)):
            if not orthogonal(projs[j], projs[k]):
                raise NotOrthogonal(j + 1, k + 1)
    return DecompositionOfIdentity(dim, tuple(projs))


# --- JSON codecs ------------------------------------------------------------


def matrix_to_json(m: Matrix) -> list[list[list[str]]]:
    return [[e.to_strings() for e in row] for row in m.entries]


def matrix_from_json(rows: object) -> Matrix:
    if not isinstance(rows, list) or not rows:
        raise ParseError("matrix must be a non-empty list of rows")
    try:
        return Matrix.of(
            [[Scalar.from_strings(entry) for entry in row] for row in rows]
        )
    except (TypeError, ValueError, ArithmeticError) as exc:
        raise ParseError(f"bad matrix encoding: {exc}") from exc


def vector_to_json(v: Vector) -> list[list[str]]:
    return [e.to_strings() for e in v.entries]


def vector_from_json(entries: object) -> Vector:
    if not isinstance(entries, list) or not entries:
        raise ParseError("vector must be a non-empty list of scalars")
    try:
        return Vector.of([Scalar.from_strings(entry) for entry in entries])
    except (TypeError, ValueError, ArithmeticError) as exc:
        raise ParseError(f"bad vector encoding: {exc}") from exc


def decomposition_to_json(d: DecompositionOfIdentity) -> dict:
    return {
        "dim": d.dim,
        "cells": [
            {"rank": p.rank, "matrix": matrix_to_json(p.matrix)} for p in d.cells
        ],
    }


def decomposition_from_json(obj: object) -> DecompositionOfIdentity:
    if not isinstance(obj, dict) or "cells" not in obj:
        raise ParseError("decomposition file must be an object with 'cells'")
    raw_cells = obj["cells"]
    if not isinstance(raw_cells, list) or not raw_cells:
        raise ParseError("'cells' must be a non-empty list")
    matrices = []
    claimed_ranks = []
    for cell in raw_cells:
        if not isinstance(cell, dict) or "matrix" not in cell:
            raise ParseError("each cell must be an object with 'matrix'")
        matrices.append(matrix_from_json(cell["matrix"]))
        claimed_ranks.append(cell.get("rank"))
    d = validate_decomposition(matrices)
    if "dim" in obj and obj["dim"] != d.dim:
        raise ParseError(f"declared dim {obj['dim']} but matrices have dim {d.dim}")
    for j, (claimed, p) in enumerate(zip(claimed_ranks, d.cells), start=1):
        if claimed is not None and claimed != p.rank:
            raise ParseError(f"cell {j} declares rank {claimed} but has rank {p.rank}")
    return d
