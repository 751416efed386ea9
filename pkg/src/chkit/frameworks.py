"""Frameworks: decompositions of the identity with their event algebras,
and the relations between them.

Two frameworks are compatible when every projector of one commutes with
every projector of the other; compatible frameworks combine into their
common refinement and a description may then still use a single algebra.
Incompatible frameworks cannot be combined: a conjunction of
non-commuting projectors is meaningless (not false - its negation would
be equally meaningless), and a ReasoningSession never answers a truth
query for a projector outside its active algebra.

A truth-assignment family (one truth functional per framework) can be
checked for the every-framework agreement property: every projector
realized in two or more of the algebras must receive one value.  From an
agreeing family one can assemble a candidate global assignment and audit
it against the homomorphism conditions restricted to commuting pairs,
plus the red flag of two non-commuting projectors both assigned true.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product as iter_product
from typing import Iterable, Mapping, Sequence

from .errors import (
    AmbiguousRefinement,
    DimMismatch,
    IncompatibleFrameworks,
    InconsistentFamily,
    NoAssertedTruth,
    NotARefinement,
    NotInFramework,
    ParseError,
)
from .events import Event, EventAlgebra, TruthFunctional, eval_truth
from .hilbert import (
    DecompositionOfIdentity,
    Matrix,
    Projector,
    commutes,
    complement,
    leq,
    matrix_from_json,
    matrix_to_json,
    projector_from_ray,
    validate_decomposition,
)
from .hilbert import Vector


@dataclass(frozen=True, eq=False)
class Framework:
    """A labeled decomposition of the identity plus its event algebra."""

    label: str
    decomposition: DecompositionOfIdentity

    @property
    def dim(self) -> int:
        return self.decomposition.dim

    @property
    def n_cells(self) -> int:
        return self.decomposition.n_cells

    @cached_property
    def algebra(self) -> EventAlgebra:
        return EventAlgebra(self.decomposition)

    def cell(self, k: int) -> Projector:
        if not 1 <= k <= self.n_cells:
            raise NotInFramework(f"cell {k} not in 1..{self.n_cells} of {self.label!r}")
        return self.decomposition.cells[k - 1]

    def truth_functional(self, k: int) -> TruthFunctional:
        if not 1 <= k <= self.n_cells:
            raise NotInFramework(f"cell {k} not in 1..{self.n_cells} of {self.label!r}")
        return TruthFunctional(k, self.algebra)

    def __repr__(self) -> str:
        return f"Framework({self.label!r}, dim={self.dim}, n_cells={self.n_cells})"


class FrameworkSet:
    """Frameworks with distinct labels over one Hilbert space.

    Incompatible frameworks may coexist here; only combining them into a
    single description is blocked.
    """

    def __init__(self, frameworks: Sequence[Framework]):
        if not frameworks:
            raise ValueError("framework set needs at least one framework")
        self.frameworks: tuple[Framework, ...] = tuple(frameworks)
        self.dim = self.frameworks[0].dim
        labels = [f.label for f in self.frameworks]
        if len(set(labels)) != len(labels):
            raise ValueError("framework labels must be distinct")
        for f in self.frameworks:
            if f.dim != self.dim:
                raise DimMismatch(
                    f"framework {f.label!r} has dim {f.dim}, expected {self.dim}"
                )
        self.by_label = {f.label: f for f in self.frameworks}

    def __getitem__(self, label: str) -> Framework:
        try:
            return self.by_label[label]
        except KeyError:
            raise KeyError(f"no framework labeled {label!r}") from None

    def labels(self) -> list[str]:
        return [f.label for f in self.frameworks]

    def __iter__(self):
        return iter(self.frameworks)

    def __repr__(self) -> str:
        return f"FrameworkSet({self.labels()})"


def is_compatible(f1: Framework, f2: Framework) -> bool:
    """True iff every cell of f1 commutes with every cell of f2."""
    if f1.dim != f2.dim:
        raise DimMismatch(f"frameworks of dim {f1.dim} and {f2.dim}")
    return all(
        commutes(p, q)
        for p in f1.decomposition.cells
        for q in f2.decomposition.cells
    )


def common_refinement(fs: Sequence[Framework], label: str | None = None) -> Framework:
    """Combine pairwise-compatible frameworks into one framework.

    Cells are the nonzero products of one cell from each input, ordered
    lexicographically by the input cell indices.  Raises
    IncompatibleFrameworks on the first non-commuting pair.
    """
    if not fs:
        raise ValueError("need at least one framework")
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if not is_compatible(fs[i], fs[j]):
                raise IncompatibleFrameworks(fs[i].label, fs[j].label)
    dim = fs[0].dim
    cells: list[Matrix] = []
    for combo in iter_product(*(f.decomposition.cells for f in fs)):
        m = combo[0].matrix
        for p in combo[1:]:
            m = m @ p.matrix
        if not m.is_zero():
            cells.append(m)
    decomposition = validate_decomposition(cells)
    if label is None:
        label = "&".join(f.label for f in fs)
    return Framework(label, decomposition)


def _is_refinement_decomp(
    fine: DecompositionOfIdentity, coarse: DecompositionOfIdentity
) -> bool:
    if fine.dim != coarse.dim:
        raise DimMismatch(f"decompositions of dim {fine.dim} and {coarse.dim}")
    for c in coarse.cells:
        below = [f for f in fine.cells if leq(f, c)]
        total = Matrix.zeros(fine.dim)
        for f in below:
            total = total + f.matrix
        if total != c.matrix:
            return False
    return True


def is_refinement(fine: Framework, coarse: Framework) -> bool:
    """True iff every coarse cell is an exact sum of fine cells."""
    return _is_refinement_decomp(fine.decomposition, coarse.decomposition)


class Meaningless:
    """Result of conjoining non-commuting projectors.

    Deliberately not the zero projector: a false proposition has a true
    negation, a meaningless one has a meaningless negation.
    """

    _instance: Meaningless | None = None

    def __new__(cls) -> Meaningless:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Meaningless"


MEANINGLESS = Meaningless()


def conjunction(p: Projector, q: Projector) -> Projector | Meaningless:
    """PQ when the projectors commute; Meaningless otherwise."""
    if not commutes(p, q):
        return MEANINGLESS
    return Projector.from_matrix(p.matrix @ q.matrix)


@dataclass(frozen=True)
class UniqueTruth:
    functional: TruthFunctional


@dataclass(frozen=True)
class Candidates:
    cells: frozenset[int]


def refine_truth(
    t: TruthFunctional, fine: Framework
) -> UniqueTruth | Candidates:
    """Propagate a coarse true cell into a refining framework.

    Admissible fine truth functionals select a fine cell lying inside the
    coarse true cell T.  When T survives intact as a fine cell the
    propagation is unique; otherwise every fine cell inside T is a
    candidate.
    """
    backing = t.algebra.backing
    if not isinstance(backing, DecompositionOfIdentity):
        raise NotARefinement("truth functional is not over a quantum decomposition")
    if not _is_refinement_decomp(fine.decomposition, backing):
        raise NotARefinement(
            f"{fine.label!r} does not refine the functional's decomposition"
        )
    true_cell = backing.cells[t.selected_cell - 1]
    admissible = [
        k
        for k in range(1, fine.n_cells + 1)
        if leq(fine.decomposition.cells[k - 1], true_cell)
    ]
    if len(admissible) == 1:
        return UniqueTruth(fine.truth_functional(admissible[0]))
    return Candidates(frozenset(admissible))


def event_of_projector(f: Framework, p: Projector) -> Event | None:
    """The event of f's algebra realized by p, or None if p is not realized."""
    if p.dim != f.dim:
        raise DimMismatch(f"projector of dim {p.dim} against framework dim {f.dim}")
    below = [k for k in range(1, f.n_cells + 1) if leq(f.cell(k), p)]
    if sum(f.cell(k).rank for k in below) != p.rank:
        return None
    mask = frozenset(below)
    if f.decomposition.realize_event(mask) != p.matrix:
        return None
    return Event(mask, f.algebra)


def frameworks_containing(p: Projector, s: FrameworkSet) -> set[str]:
    """Labels of the frameworks whose algebras realize p."""
    if p.dim != s.dim:
        raise DimMismatch(f"projector of dim {p.dim} against set dim {s.dim}")
    return {
        f.label for f in s.frameworks if event_of_projector(f, p) is not None
    }


class TruthAssignmentFamily:
    """One truth functional per framework label."""

    def __init__(self, assignments: Mapping[str, TruthFunctional]):
        self.assignments = dict(assignments)

    @classmethod
    def from_cells(cls, s: FrameworkSet, cells: Mapping[str, int]) -> TruthAssignmentFamily:
        assignments = {}
        for label, k in cells.items():
            assignments[label] = s[label].truth_functional(k)
        return cls(assignments)

    def selected_cells(self) -> dict[str, int]:
        return {label: t.selected_cell for label, t in self.assignments.items()}

    def __repr__(self) -> str:
        return f"TruthAssignmentFamily({self.selected_cells()})"


@dataclass(frozen=True)
class EfpViolation:
    """A projector valued differently by two frameworks that realize it."""

    projector: Projector
    label1: str
    value1: int
    label2: str
    value2: int


def _realization_table(
    fam: TruthAssignmentFamily, s: FrameworkSet
) -> dict[Matrix, list[tuple[str, int, int]]]:
    """matrix -> [(label, rank, value)] over all realized events, in order."""
    table: dict[Matrix, list[tuple[str, int, int]]] = {}
    for f in s.frameworks:
        if f.label not in fam.assignments:
            raise ValueError(f"family does not cover framework {f.label!r}")
        t = fam.assignments[f.label]
        if t.algebra is not f.algebra:
            raise ValueError(
                f"functional for {f.label!r} is not over that framework's algebra"
            )
        for ev in f.algebra.all_events():
            m = f.decomposition.realize_event(ev.mask)
            rank = sum(f.cell(k).rank for k in ev.mask)
            table.setdefault(m, []).append((f.label, rank, eval_truth(t, ev)))
    return table


def check_every_framework_principle(
    fam: TruthAssignmentFamily, s: FrameworkSet
) -> EfpViolation | None:
    """First projector assigned two different values, or None if none is.

    Scans frameworks in set order and events in mask order, so the
    reported violation is deterministic.
    """
    table = _realization_table(fam, s)
    for m, entries in table.items():
        first_label, rank, first_value = entries[0]
        for label, _, value in entries[1:]:
            if value != first_value:
                return EfpViolation(
                    Projector(m, rank), first_label, first_value, label, value
                )
    return None


@dataclass(frozen=True)
class CandidateConflict:
    """A failed audit condition of a candidate global assignment.

    kind is one of "identity", "complement", "product" (the homomorphism
    conditions restricted to defined / commuting cases) or
    "noncommuting_true" (two non-commuting projectors both assigned 1,
    the single-framework-rule red flag).
    """

    kind: str
    p: Projector
    q: Projector | None = None


@dataclass(frozen=True)
class PartialAssignment:
    """Candidate global truth assignment on every realized projector."""

    values: dict[Projector, int] = field(compare=False)
    conflicts: tuple[CandidateConflict, ...] = ()

    def value_of(self, p: Projector) -> int | None:
        return self.values.get(p)


def build_universal_candidate(
    fam: TruthAssignmentFamily, s: FrameworkSet
) -> PartialAssignment:
    """Assemble the candidate global assignment from an agreeing family.

    Every projector realized by some framework gets the family's common
    value.  The candidate is then audited: identity must be 1, defined
    complements must be opposite, defined commuting products must
    multiply, and any two non-commuting projectors both assigned 1 are
    flagged.  Conflicts are reported in a deterministic projector order.
    """
    violation = check_every_framework_principle(fam, s)
    if violation is not None:
        raise InconsistentFamily(
            f"{violation.label1!r} and {violation.label2!r} disagree on a shared projector"
        )
    table = _realization_table(fam, s)
    values: dict[Projector, int] = {}
    for m, entries in table.items():
        _, rank, value = entries[0]
        values[Projector(m, rank)] = value
    by_matrix = {p.matrix: v for p, v in values.items()}
    ordered = sorted(values, key=lambda p: p.matrix.sort_key())
    conflicts: list[CandidateConflict] = []
    identity = Matrix.identity(s.dim)
    if by_matrix.get(identity) != 1:
        conflicts.append(CandidateConflict("identity", Projector(identity, s.dim)))
    for p in ordered:
        comp = complement(p)
        if comp.matrix in by_matrix and p.matrix.sort_key() <= comp.matrix.sort_key():
            if by_matrix[comp.matrix] != 1 - values[p]:
                conflicts.append(CandidateConflict("complement", p, comp))
    for i, p in enumerate(ordered):
        for q in ordered[i + 1 :]:
            if commutes(p, q):
                prod = p.matrix @ q.matrix
                if prod in by_matrix and by_matrix[prod] != values[p] * values[q]:
                    conflicts.append(CandidateConflict("product", p, q))
            elif values[p] == 1 and values[q] == 1:
                conflicts.append(CandidateConflict("noncommuting_true", p, q))
    return PartialAssignment(values, tuple(conflicts))


class QueryAnswer(Enum):
    TRUE = "true"
    FALSE = "false"
    MEANINGLESS_IN_THIS_FRAMEWORK = "meaningless-in-this-framework"


class ReasoningSession:
    """Single-framework reasoning about one system at one time.

    At most one framework is active; queries about projectors outside its
    algebra are answered meaningless, never silently re-framed.  The
    session may move to a refining framework, carrying the asserted truth
    along when the propagation is unique (or when a candidate is chosen).
    """

    def __init__(self, framework: Framework):
        self.framework = framework
        self.asserted_cell: int | None = None
        self.log: list[tuple[str, object]] = []

    def assert_cell(self, k: int) -> None:
        if not 1 <= k <= self.framework.n_cells:
            raise NotInFramework(
                f"cell {k} not in 1..{self.framework.n_cells} of {self.framework.label!r}"
            )
        self.asserted_cell = k
        self.log.append(("assert", k))

    def query(self, p: Projector) -> QueryAnswer:
        ev = event_of_projector(self.framework, p)
        if ev is None:
            answer = QueryAnswer.MEANINGLESS_IN_THIS_FRAMEWORK
            self.log.append(("query", answer))
            return answer
        if self.asserted_cell is None:
            raise NoAssertedTruth("no cell asserted in the active framework")
        t = self.framework.truth_functional(self.asserted_cell)
        answer = QueryAnswer.TRUE if eval_truth(t, ev) == 1 else QueryAnswer.FALSE
        self.log.append(("query", answer))
        return answer

    def refine(self, fine: Framework, choose_cell: int | None = None) -> None:
        if not is_refinement(fine, self.framework):
            raise NotARefinement(
                f"{fine.label!r} does not refine {self.framework.label!r}"
            )
        if self.asserted_cell is not None:
            t = self.framework.truth_functional(self.asserted_cell)
            result = refine_truth(t, fine)
            if isinstance(result, UniqueTruth):
                new_cell = result.functional.selected_cell
                if choose_cell is not None and choose_cell != new_cell:
                    raise AmbiguousRefinement(
                        f"cell {choose_cell} is not the unique admissible cell {new_cell}"
                    )
            else:
                if choose_cell is None or choose_cell not in result.cells:
                    raise AmbiguousRefinement(
                        f"choose one of the admissible cells {sorted(result.cells)}"
                    )
                new_cell = choose_cell
            self.asserted_cell = new_cell
        self.framework = fine
        self.log.append(("refine", fine.label))


def session_open(framework: Framework) -> ReasoningSession:
    return ReasoningSession(framework)


# --- built-in framework set ----------------------------------------------------


def s0s1s2_frameworks() -> FrameworkSet:
    """The dim-3 incompatible-pair demo set.

    S1 = {A, B, C} and S2 = {A, D, E} share the rank-1 cell A; B and C
    project on two basis rays, D and E on their sum and difference, so
    neither B nor C commutes with D or E.  S0 = {A, I-A} is compatible
    with both and is refined by both.
    """
    a = projector_from_ray(Vector.of([1, 0, 0]))
    b = projector_from_ray(Vector.of([0, 1, 0]))
    c = projector_from_ray(Vector.of([0, 0, 1]))
    d = projector_from_ray(Vector.of([0, 1, 1]))
    e = projector_from_ray(Vector.of([0, 1, -1]))
    s0 = Framework("S0", validate_decomposition([a, complement(a)]))
    s1 = Framework("S1", validate_decomposition([a, b, c]))
    s2 = Framework("S2", validate_decomposition([a, d, e]))
    return FrameworkSet([s0, s1, s2])


# --- JSON codecs ----------------------------------------------------------------


def framework_set_to_json(s: FrameworkSet) -> dict:
    return {
        "dim": s.dim,
        "frameworks": [
            {
                "label": f.label,
                "cells": [matrix_to_json(p.matrix) for p in f.decomposition.cells],
            }
            for f in s.frameworks
        ],
    }


def framework_set_from_json(obj: object) -> FrameworkSet:
    if not isinstance(obj, dict) or "frameworks" not in obj:
        raise ParseError("framework file must be an object with 'frameworks'")
    raw = obj["frameworks"]
    if not isinstance(raw, list) or not raw:
        raise ParseError("'frameworks' must be a non-empty list")
    frameworks = []
    for entry in raw:
        if not isinstance(entry, dict) or "label" not in entry or "cells" not in entry:
            raise ParseError("each framework needs 'label' and 'cells'")
        cells = [matrix_from_json(m) for m in entry["cells"]]
        frameworks.append(Framework(str(entry["label"]), validate_decomposition(cells)))
    s = FrameworkSet(frameworks)
    if "dim" in obj and obj["dim"] != s.dim:
        raise ParseError(f"declared dim {obj['dim']} but cells have dim {s.dim}")
    return s


def family_to_json(fam: TruthAssignmentFamily) -> dict:
    return {"assignments": fam.selected_cells()}


def family_from_json(s: FrameworkSet, obj: object) -> TruthAssignmentFamily:
    if not isinstance(obj, dict) or "assignments" not in obj:
        raise ParseError("family file must be an object with 'assignments'")
    raw = obj["assignments"]
    if not isinstance(raw, dict):
        raise ParseError("'assignments' must map labels to cell indices")
    cells: dict[str, int] = {}
    for label, k in raw.items():
        if label not in s.by_label:
            raise ParseError(f"no framework labeled {label!r}")
        if not isinstance(k, int):
            raise ParseError(f"cell index for {label!r} must be an integer")
        cells[label] = k
    try:
        return TruthAssignmentFamily.from_cells(s, cells)
    except NotInFramework as exc:
        raise ParseError(str(exc)) from exc
