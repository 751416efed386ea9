"""Boolean event algebras over a sample space of N base cells.

A sample space here is anything with `n_cells` and `realize_event(mask)`:
a quantum decomposition of the identity or a classical coarse graining.
Its event algebra has 2^N elements, identified with subsets of {1..N};
the realized element is the sum (union) of the selected base cells.  A
truth functional is a {0,1}-homomorphism on the algebra and is always of
the form "select cell k": value 1 exactly on the events containing k.

Terminology note: conventions differ on which of the two indicator
compositions (the product PQ versus P + Q - PQ) is called "join" and
which "meet"; this module avoids both words and exposes the neutral
event_and (product) and event_or (P + Q - PQ).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Protocol, Sequence

from .errors import (
    AlgebraMismatch,
    OracleTooLarge,
    ParseError,
    ZeroProbabilityCondition,
)

_ORACLE_MAX_CELLS = 4


class SampleSpace(Protocol):
    n_cells: int

    def realize_event(self, mask: frozenset[int]) -> object: ...


class EventAlgebra:
    """The 2^N-element Boolean algebra generated by a sample space.

    Identity semantics: events and truth functionals belong to one algebra
    instance and may not be mixed across instances.
    """

    def __init__(self, backing: SampleSpace):
        self.backing = backing
        self.n_cells = backing.n_cells

    @property
    def n_events(self) -> int:
        return 2**self.n_cells

    def event(self, cells: Iterable[int]) -> Event:
        mask = frozenset(cells)
        for k in mask:
            if not (isinstance(k, int) and 1 <= k <= self.n_cells):
                raise ValueError(f"cell index {k!r} not in 1..{self.n_cells}")
        return Event(mask, self)

    def cell(self, k: int) -> Event:
        return self.event((k,))

    def zero(self) -> Event:
        return Event(frozenset(), self)

    def identity(self) -> Event:
        return Event(frozenset(range(1, self.n_cells + 1)), self)

    def all_events(self) -> Iterator[Event]:
        """All 2^N events, in increasing bitmask order (deterministic)."""
        for bits in range(self.n_events):
            mask = frozenset(
                k for k in range(1, self.n_cells + 1) if bits >> (k - 1) & 1
            )
            yield Event(mask, self)

    def realize(self, ev: Event) -> object:
        if ev.algebra is not self:
            raise AlgebraMismatch("event realized against a foreign algebra")
        return self.backing.realize_event(ev.mask)

    def __repr__(self) -> str:
        return f"EventAlgebra(n_cells={self.n_cells})"


@dataclass(frozen=True, eq=False)
class Event:
    """A subset of the base cells; the empty mask is 0, the full mask is I."""

    mask: frozenset[int]
    algebra: EventAlgebra

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Event):
            return NotImplemented
        return self.algebra is other.algebra and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.mask, id(self.algebra)))

    def __invert__(self) -> Event:
        return event_complement(self)

    def __and__(self, other: Event) -> Event:
        return event_and(self, other)

    def __or__(self, other: Event) -> Event:
        return event_or(self, other)

    def __repr__(self) -> str:
        return f"Event({sorted(self.mask)})"


def _check_same_algebra(p: Event, q: Event) -> None:
    if p.algebra is not q.algebra:
        raise AlgebraMismatch("events belong to different algebras")


def event_complement(p: Event) -> Event:
    """Realizes I - P."""
    full = frozenset(range(1, p.algebra.n_cells + 1))
    return Event(full - p.mask, p.algebra)


def event_and(p: Event, q: Event) -> Event:
    """Realizes the product PQ."""
    _check_same_algebra(p, q)
    return Event(p.mask & q.mask, p.algebra)


def event_or(p: Event, q: Event) -> Event:
    """Realizes P + Q - PQ."""
    _check_same_algebra(p, q)
    return Event(p.mask | q.mask, p.algebra)


@dataclass(frozen=True, eq=False)
class TruthFunctional:
    """The homomorphism that holds exactly on events containing cell k."""

    selected_cell: int
    algebra: EventAlgebra

    def __post_init__(self) -> None:
        if not 1 <= self.selected_cell <= self.algebra.n_cells:
            raise ValueError(
                f"selected cell {self.selected_cell} not in 1..{self.algebra.n_cells}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruthFunctional):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.selected_cell == other.selected_cell
        )

    def __hash__(self) -> int:
        return hash((self.selected_cell, id(self.algebra)))

    def __call__(self, p: Event) -> int:
        return eval_truth(self, p)

    def __repr__(self) -> str:
        return f"TruthFunctional(cell={self.selected_cell})"


def eval_truth(t: TruthFunctional, p: Event) -> int:
    """1 iff the selected cell lies in p's mask, else 0."""
    if p.algebra is not t.algebra:
        raise AlgebraMismatch("event evaluated against a foreign truth functional")
    return 1 if t.selected_cell in p.mask else 0


@dataclass(frozen=True)
class Violation:
    """First failed homomorphism condition, with the witnessing events."""

    condition: str  # "identity" | "complement" | "product"
    witnesses: tuple[Event, ...]


def verify_homomorphism(
    algebra: EventAlgebra, f: Callable[[Event], int]
) -> Violation | None:
    """Check the three truth-functional conditions over the whole algebra.

    f(I) = 1, f(I-P) = 1 - f(P) for every P, and f(PQ) = f(P) f(Q) for
    every pair; returns None on success or the first Violation found, in
    deterministic event order.
    """
    events = list(algebra.all_events())
    values = {ev: _binary(f(ev)) for ev in events}
    if values[algebra.identity()] != 1:
        return Violation("identity", (algebra.identity(),))
    for p in events:
        if values[event_complement(p)] != 1 - values[p]:
            return Violation("complement", (p,))
    for p in events:
        vp = values[p]
        for q in events:
            if values[event_and(p, q)] != vp * values[q]:
                return Violation("product", (p, q))
    return None


def _binary(v: object) -> int:
    if v not in (0, 1):
        raise ValueError(f"truth value must be 0 or 1, got {v!r}")
    return int(v)  # type: ignore[call-overload]


def enumerate_truth_functionals(
    algebra: EventAlgebra, *, oracle: bool = False
) -> list[TruthFunctional]:
    """All truth functionals on the algebra: exactly one per base cell.

    The direct path returns [select-1 .. select-N].  With oracle=True the
    result is found by brute force instead: every one of the 2^(2^N)
    {0,1}-valued functions on the algebra is generated and filtered by
    verify_homomorphism, which must leave exactly the N cell-selectors.
    The oracle path refuses N > 4.
    """
    n = algebra.n_cells
    if not oracle:
        return [TruthFunctional(k, algebra) for k in range(1, n + 1)]
    if n > _ORACLE_MAX_CELLS:
        raise OracleTooLarge(f"oracle enumeration supports N <= {_ORACLE_MAX_CELLS}")
    events = list(algebra.all_events())
    index = {ev: i for i, ev in enumerate(events)}
    survivors: list[TruthFunctional] = []
    for code in range(2 ** len(events)):
        f = lambda ev: code >> index[ev] & 1  # noqa: E731
        if verify_homomorphism(algebra, f) is not None:
            continue
        ones = [k for k in range(1, n + 1) if f(algebra.cell(k)) == 1]
        assert len(ones) == 1, "homomorphism must select exactly one cell"
        survivors.append(TruthFunctional(ones[0], algebra))
    assert len(survivors) == n, "classification: exactly one survivor per cell"
    return sorted(survivors, key=lambda t: t.selected_cell)


def conditional_probability(
    p: Event, k: int, probs: Sequence[Fraction | int | str]
) -> Fraction:
    """Pr(P | cell k) for an exact probability vector over the cells.

    Always 0 or 1, and equal to the select-k truth functional on P.
    """
    algebra = p.algebra
    if len(probs) != algebra.n_cells:
        raise ValueError(
            f"probability vector has {len(probs)} entries, expected {algebra.n_cells}"
        )
    vec = [Fraction(q) if not isinstance(q, Fraction) else q for q in probs]
    if any(q < 0 for q in vec):
        raise ValueError("probabilities must be non-negative")
    if sum(vec) != 1:
        raise ValueError("probabilities must sum to exactly 1")
    if not 1 <= k <= algebra.n_cells:
        raise ValueError(f"cell index {k} not in 1..{algebra.n_cells}")
    if vec[k - 1] == 0:
        raise ZeroProbabilityCondition(f"cell {k} has probability zero")
    joint = sum((vec[j - 1] for j in p.mask if j == k), start=Fraction(0))
    return joint / vec[k - 1]


def parse_event_literal(algebra: EventAlgebra, text: str) -> Event:
    """Parse the CLI event syntax: "1,3" (cell indices), "I", or "0"."""
    text = text.strip()
    if text == "I":
        return algebra.identity()
    if text == "0":
        return algebra.zero()
    try:
        cells = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ParseError(f"bad event literal {text!r}") from exc
    if not cells:
        raise ParseError(f"bad event literal {text!r}")
    try:
        return algebra.event(cells)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
