"""Finite classical phase spaces, indicators, and coarse grainings.

Classically a universal truth functional exists: fix a phase point q and
assign 1 to exactly the indicators containing it.  Restricting it to any
coarse graining's event algebra gives the select-cell functional of the
cell holding q, and any family of such restrictions agrees on every
shared algebra element.  Phase spaces are finite point sets; the harmonic
oscillator demo lives on an exact rational grid.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InvalidPartition, ParseError, UnknownPoint
from .events import EventAlgebra, TruthFunctional

PointId = Hashable
Coords = tuple[Fraction, Fraction]


class PhaseSpace:
    """A finite set of distinct points, optionally carrying (x, p) coords."""

    def __init__(
        self,
        points: Iterable[PointId],
        coords: Mapping[PointId, Coords] | None = None,
    ):
        self.points: tuple[PointId, ...] = tuple(points)
        if not self.points:
            raise ValueError("phase space needs at least one point")
        self.point_set = frozenset(self.points)
        if len(self.point_set) != len(self.points):
            raise ValueError("phase space points must be distinct")
        self.coords = dict(coords) if coords is not None else None

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, q: PointId) -> bool:
        return q in self.point_set

    def coords_of(self, q: PointId) -> Coords:
        if self.coords is None or q not in self.coords:
            raise UnknownPoint(f"no coordinates for point {q!r}")
        return self.coords[q]

    def __repr__(self) -> str:
        return f"PhaseSpace(n_points={len(self.points)})"


class Indicator:
    """The {0,1}-valued function that is 1 exactly on a subset of points."""

    def __init__(self, space: PhaseSpace, subset: Iterable[PointId]):
        self.space = space
        self.subset = frozenset(subset)
        if not self.subset <= space.point_set:
            raise UnknownPoint("indicator subset contains unknown points")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Indicator):
            return NotImplemented
        return self.space is other.space and self.subset == other.subset

    def __hash__(self) -> int:
        return hash((self.subset, id(self.space)))

    def __call__(self, q: PointId) -> int:
        if q not in self.space:
            raise UnknownPoint(f"point {q!r} not in the phase space")
        return 1 if q in self.subset else 0

    def complement(self) -> Indicator:
        return Indicator(self.space, self.space.point_set - self.subset)

    def __repr__(self) -> str:
        return f"Indicator(size={len(self.subset)})"


def indicator_from_predicate(
    space: PhaseSpace, pred: Callable[[PointId], bool]
) -> Indicator:
    return Indicator(space, (q for q in space.points if pred(q)))


class CoarseGraining:
    """A partition of the phase space into non-empty cells.

    Cell indicators are disjoint and sum to the identity indicator; cells
    keep their construction order and are referenced 1-based.
    """

    def __init__(self, space: PhaseSpace, cells: Sequence[Iterable[PointId]]):
        self.space = space
        self.cells: tuple[frozenset[PointId], ...] = tuple(
            frozenset(c) for c in cells
        )
        if not self.cells:
            raise InvalidPartition("coarse graining needs at least one cell")
        seen: set[PointId] = set()
        for j, cell in enumerate(self.cells, start=1):
            if not cell:
                raise InvalidPartition(f"cell {j} is empty")
            if cell & seen:
                raise InvalidPartition(f"cell {j} overlaps an earlier cell")
            seen |= cell
        if seen != space.point_set:
            raise InvalidPartition("cells do not cover the phase space")
        self.n_cells = len(self.cells)

    def realize_event(self, mask: frozenset[int]) -> frozenset[PointId]:
        out: frozenset[PointId] = frozenset()
        for k in mask:
            out |= self.cells[k - 1]
        return out

    @cached_property
    def algebra(self) -> EventAlgebra:
        return EventAlgebra(self)

    def cell_of(self, q: PointId) -> int:
        """1-based index of the unique cell containing q."""
        if q not in self.space:
            raise UnknownPoint(f"point {q!r} not in the phase space")
        for k, cell in enumerate(self.cells, start=1):
            if q in cell:
                return k
        raise AssertionError("partition invariant violated")

    def indicator(self, mask: frozenset[int]) -> Indicator:
        return Indicator(self.space, self.realize_event(mask))

    def __repr__(self) -> str:
        return f"CoarseGraining(n_cells={self.n_cells})"


def universal_truth(q: PointId, p: Indicator) -> int:
    """The point-q universal truth value of p: 1 iff q lies in p."""
    return p(q)


def restrict_universal(q: PointId, g: CoarseGraining) -> TruthFunctional:
    """Restriction of the point-q universal functional to g's algebra.

    The selected cell is the one containing q, so the restriction agrees
    with universal_truth(q, .) on every event of the algebra.
    """
    return TruthFunctional(g.cell_of(q), g.algebra)


def common_refinement_classical(gs: Sequence[CoarseGraining]) -> CoarseGraining:
    """Coarsest common refinement: all non-empty intersections of cells.

    Result cells are ordered lexicographically by the tuple of input cell
    indices that produced them.
    """
    if not gs:
        raise ValueError("need at least one coarse graining")
    space = gs[0].space
    if any(g.space is not space for g in gs):
        raise ValueError("coarse grainings must share one phase space")
    pieces: list[frozenset[PointId]] = [space.point_set]
    for g in gs:
        pieces = [
            piece & cell for piece in pieces for cell in g.cells if piece & cell
        ]
    return CoarseGraining(space, pieces)


def join_partition(g1: CoarseGraining, g2: CoarseGraining) -> CoarseGraining:
    """Finest common coarsening of two grainings.

    Its blocks are the connected components of the cell-overlap graph; the
    subsets realizable in both event algebras are exactly the unions of
    these blocks.
    """
    if g1.space is not g2.space:
        raise ValueError("coarse grainings must share one phase space")
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x: tuple[int, int]) -> tuple[int, int]:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: tuple[int, int], y: tuple[int, int]) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    cell1_of = {q: j for j, cell in enumerate(g1.cells) for q in cell}
    cell2_of = {q: j for j, cell in enumerate(g2.cells) for q in cell}
    for q in g1.space.points:
        union((1, cell1_of[q]), (2, cell2_of[q]))
    blocks: dict[tuple[int, int], set[PointId]] = {}
    order: list[tuple[int, int]] = []
    for q in g1.space.points:
        root = find((1, cell1_of[q]))
        if root not in blocks:
            blocks[root] = set()
            order.append(root)
        blocks[root].add(q)
    return CoarseGraining(g1.space, [blocks[r] for r in order])


# --- harmonic-oscillator demo grid -------------------------------------------


def oscillator_grid(n: int = 101, extent: int | Fraction = 2) -> PhaseSpace:
    """An n-by-n rational grid over [-extent, extent]^2 in the (x, p) plane.

    Point ids are "i,j" strings; exact coordinates are attached.
    """
    if n < 2:
        raise ValueError("grid needs at least 2 points per axis")
    extent = Fraction(extent)
    step = 2 * extent / (n - 1)
    ids = []
    coords = {}
    for i in range(n):
        x = -extent + i * step
        for j in range(n):
            p = -extent + j * step
            pid = f"{i},{j}"
            ids.append(pid)
            coords[pid] = (x, p)
    return PhaseSpace(ids, coords)


def oscillator_energy(space: PhaseSpace, q: PointId) -> Fraction:
    """E = (x^2 + p^2) / 2 with unit mass and frequency."""
    x, p = space.coords_of(q)
    return (x * x + p * p) / 2


def energy_indicator(space: PhaseSpace, e0: int | Fraction) -> Indicator:
    """Points with energy strictly below e0 (the inside of an ellipse)."""
    e0 = Fraction(e0)
    return indicator_from_predicate(
        space, lambda q: oscillator_energy(space, q) < e0
    )


# --- JSON codec ---------------------------------------------------------------


def partition_to_json(g: CoarseGraining) -> dict:
    points = list(g.space.points)
    if not all(isinstance(q, (str, int)) for q in points):
        raise ParseError("only str or int point ids can be serialized")
    return {"points": points, "cells": [sorted(cell, key=str) for cell in g.cells]}


def partition_from_json(obj: object) -> CoarseGraining:
    if not isinstance(obj, dict) or "points" not in obj or "cells" not in obj:
        raise ParseError("partition file must be an object with 'points' and 'cells'")
    points = obj["points"]
    cells = obj["cells"]
    if not isinstance(points, list) or not isinstance(cells, list):
        raise ParseError("'points' and 'cells' must be lists")
    try:
        space = PhaseSpace(points)
        return CoarseGraining(space, [list(c) for c in cells])
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad partition: {exc}") from exc
