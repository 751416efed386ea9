"""Search for a noncontextual {0,1} assignment over rank-1 contexts.

A ray set is a collection of rays (rank-1 projector directions) with
contexts: orthogonal bases, each a decomposition of the identity.  An
assignment must give every context exactly one 1 and may never give two
orthogonal rays a 1 each (the product rule restricted to commuting
rank-1 projectors).  The backtracking search either produces a witness,
re-verified against all constraints, or exhausts the tree and reports
nonexistence with an exact node count; a parity argument provides an
independent nonexistence certificate when every ray has even context
multiplicity and the number of contexts is odd.

Determinism contract: contexts are processed in input order, the
lowest-index ray is tried first, and unit propagation (zeros forced by
orthogonality, ones forced in a context with a single open ray) runs to
fixpoint between decisions.  Node count = number of decision assignments
tried.  Splitting the root branches across workers must not change the
outcome or the node count; branches after the first witnessing one are
discarded, matching what the sequential search never explores.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import (
    ContextNotABasis,
    DimMismatch,
    DuplicateRayConflict,
    ParseError,
    UnknownDataset,
    ZeroRay,
)
from .hilbert import Vector, inner, vector_from_json, vector_to_json


@dataclass(frozen=True)
class RaySet:
    """Deduplicated rays with orthogonal-basis contexts (0-based indices)."""

    dim: int
    rays: tuple[Vector, ...]
    ray_ids: tuple[str, ...]
    contexts: tuple[tuple[int, ...], ...]

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def n_contexts(self) -> int:
        return len(self.contexts)

    def multiplicities(self) -> tuple[int, ...]:
        counts = [0] * self.n_rays
        for ctx in self.contexts:
            for r in ctx:
                counts[r] += 1
        return tuple(counts)

    def contexts_of(self) -> tuple[tuple[int, ...], ...]:
        """For each ray, the indices of the contexts containing it."""
        out: list[list[int]] = [[] for _ in range(self.n_rays)]
        for c, ctx in enumerate(self.contexts):
            for r in ctx:
                out[r].append(c)
        return tuple(tuple(cs) for cs in out)


def _canonical_ray(v: Vector) -> tuple:
    """Scale so the first nonzero entry is 1; equal tuples = same ray."""
    lead = next((i for i, e in enumerate(v.entries) if not e.is_zero()), None)
    if lead is None:
        raise ZeroRay("ray has no nonzero entry")
    inv = v.entries[lead].reciprocal()
    return (lead,) + tuple((e * inv).sort_key() for e in v.entries)


def validate_rayset(
    dim: int,
    rays: Sequence[Vector],
    contexts: Sequence[Sequence[int]],
    ids: Sequence[str] | None = None,
) -> RaySet:
    """Deduplicate projectively equal rays and check every context.

    Each context must hold exactly dim pairwise-orthogonal rays (hence a
    basis).  Raises ZeroRay, DimMismatch, DuplicateRayConflict or
    ContextNotABasis(i) with 1-based context indices in messages.
    """
    if ids is None:
        ids = [f"r{i + 1}" for i in range(len(rays))]
    if len(ids) != len(rays):
        raise ValueError("one id per ray required")
    for v in rays:
        if v.dim != dim:
            raise DimMismatch(f"ray of dim {v.dim} in a dim-{dim} ray set")
    canon_to_index: dict[tuple, int] = {}
    remap: list[int] = []
    kept_rays: list[Vector] = []
    kept_ids: list[str] = []
    for v, rid in zip(rays, ids):
        key = _canonical_ray(v)
        if key in canon_to_index:
            remap.append(canon_to_index[key])
        else:
            canon_to_index[key] = len(kept_rays)
            remap.append(len(kept_rays))
            kept_rays.append(v)
            kept_ids.append(rid)
    new_contexts: list[tuple[int, ...]] = []
    for i, ctx in enumerate(contexts, start=1):
        mapped = tuple(remap[r] for r in ctx)
        if len(set(mapped)) != len(mapped):
            raise DuplicateRayConflict(
                f"context {i} holds projectively equal rays"
            )
        if len(mapped) != dim:
            raise ContextNotABasis(i, f"has {len(mapped)} rays, expected {dim}")
        for a in range(len(mapped)):
            for b in range(a + 1, len(mapped)):
                if not inner(kept_rays[mapped[a]], kept_rays[mapped[b]]).is_zero():
                    raise ContextNotABasis(
                        i,
                        f"rays {kept_ids[mapped[a]]!r} and {kept_ids[mapped[b]]!r}"
                        " are not orthogonal",
                    )
        new_contexts.append(mapped)
    return RaySet(dim, tuple(kept_rays), tuple(kept_ids), tuple(new_contexts))


def orthogonality_graph(rs: RaySet) -> tuple[frozenset[int], ...]:
    """Adjacency sets over all ray pairs: edge iff exact inner product 0."""
    adj: list[set[int]] = [set() for _ in range(rs.n_rays)]
    for i in range(rs.n_rays):
        for j in range(i + 1, rs.n_rays):
            if inner(rs.rays[i], rs.rays[j]).is_zero():
                adj[i].add(j)
                adj[j].add(i)
    return tuple(frozenset(s) for s in adj)


@lru_cache(maxsize=64)
def _graph_cached(rs: RaySet) -> tuple[frozenset[int], ...]:
    return orthogonality_graph(rs)


@dataclass(frozen=True)
class NoncontextualAssignment:
    """0/1 per ray: one 1 per context, no orthogonal pair of 1s."""

    values: tuple[int, ...]

    def by_id(self, rs: RaySet) -> dict[str, int]:
        return dict(zip(rs.ray_ids, self.values))


@dataclass(frozen=True)
class ParityCertificate:
    """Nonexistence by counting: summing the per-context single 1 over an
    odd number of contexts is odd, but every ray contributes an even
    multiplicity, so no assignment exists."""

    context_count: int
    multiplicities: tuple[int, ...]


@dataclass(frozen=True)
class NotApplicable:
    reason: str


@dataclass(frozen=True)
class Exists:
    assignment: NoncontextualAssignment
    nodes_explored: int


@dataclass(frozen=True)
class Nonexistent:
    nodes_explored: int
    certificate: ParityCertificate | None = None


SearchResult = Exists | Nonexistent


@dataclass(frozen=True)
class Enumeration:
    """Every witness, in deterministic search order."""

    witnesses: tuple[NoncontextualAssignment, ...]
    nodes_explored: int


def verify_assignment(rs: RaySet, assignment: NoncontextualAssignment) -> bool:
    """Full constraint re-verification of a claimed witness."""
    vals = assignment.values
    if len(vals) != rs.n_rays or any(v not in (0, 1) for v in vals):
        return False
    for ctx in rs.contexts:
        if sum(vals[r] for r in ctx) != 1:
            return False
    adj = _graph_cached(rs)
    for r in range(rs.n_rays):
        if vals[r] == 1 and any(vals[s] == 1 for s in adj[r]):
            return False
    return True


class _Solver:
    """Backtracking with unit propagation; deterministic node counting."""

    def __init__(self, rs: RaySet, first_only: bool):
        self.rs = rs
        self.adj = _graph_cached(rs)
        self.contexts_of = rs.contexts_of()
        self.values: list[int | None] = [None] * rs.n_rays
        self.trail: list[int] = []
        self.nodes = 0
        self.first_only = first_only
        self.witnesses: list[NoncontextualAssignment] = []
        self.stop = False

    def _propagate(self, ray: int, val: int) -> bool:
        """Assign and close under consequences; False on contradiction."""
        stack = [(ray, val)]
        while stack:
            r, v = stack.pop()
            cur = self.values[r]
            if cur is not None:
                if cur != v:
                    return False
                continue
            self.values[r] = v
            self.trail.append(r)
            if v == 1:
                for s in self.adj[r]:
                    if self.values[s] is None:
                        stack.append((s, 0))
                    elif self.values[s] == 1:
                        return False
            else:
                for c in self.contexts_of[r]:
                    ctx = self.rs.contexts[c]
                    open_rays = []
                    has_one = False
                    for s in ctx:
                        sv = self.values[s]
                        if sv == 1:
                            has_one = True
                            break
                        if sv is None:
                            open_rays.append(s)
                    if has_one:
                        continue
                    if not open_rays:
                        return False
                    if len(open_rays) == 1:
                        stack.append((open_rays[0], 1))
        return True

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.values[self.trail.pop()] = None

    def _next_context(self) -> int | None:
        for c, ctx in enumerate(self.rs.contexts):
            if not any(self.values[r] == 1 for r in ctx):
                return c
        return None

    def _record_witness(self) -> None:
        vals = tuple(0 if v is None else v for v in self.values)
        self.witnesses.append(NoncontextualAssignment(vals))
        if self.first_only:
            self.stop = True

    def initial_propagate(self) -> bool:
        """Force the single ray of any 1-ray context before branching."""
        for ctx in self.rs.contexts:
            if len(ctx) == 1 and self.values[ctx[0]] is None:
                if not self._propagate(ctx[0], 1):
                    return False
        return True

    def root_candidates(self) -> tuple[int | None, list[int]]:
        c = self._next_context()
        if c is None:
            return None, []
        return c, sorted(
            r for r in self.rs.contexts[c] if self.values[r] is None
        )

    def explore(self, forced_root: int | None = None) -> None:
        c = self._next_context()
        if c is None:
            self._record_witness()
            return
        candidates = sorted(r for r in self.rs.contexts[c] if self.values[r] is None)
        if forced_root is not None:
            candidates = [forced_root]
        for r in candidates:
            self.nodes += 1
            mark = len(self.trail)
            if self._propagate(r, 1):
                self.explore()
            self._undo(mark)
            if self.stop:
                return


def _run_branch(
    rs: RaySet, root: int, first_only: bool
) -> tuple[list[NoncontextualAssignment], int]:
    solver = _Solver(rs, first_only)
    if not solver.initial_propagate():
        return [], 0
    solver.explore(forced_root=root)
    return solver.witnesses, solver.nodes


def _search(
    rs: RaySet, first_only: bool, parallel: int
) -> tuple[list[NoncontextualAssignment], int]:
    solver = _Solver(rs, first_only)
    if not solver.initial_propagate():
        return [], 0
    if parallel <= 1:
        solver.explore()
        return solver.witnesses, solver.nodes
    root_context, candidates = solver.root_candidates()
    if root_context is None:
        solver._record_witness()
        return solver.witnesses, 0
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        branch_results = list(
            pool.map(_run_branch, [rs] * len(candidates), candidates,
                     [first_only] * len(candidates))
        )
    witnesses: list[NoncontextualAssignment] = []
    nodes = 0
    for branch_witnesses, branch_nodes in branch_results:
        nodes += branch_nodes
        witnesses.extend(branch_witnesses)
        if first_only and branch_witnesses:
            break
    return witnesses, nodes


def search_assignment(rs: RaySet, *, parallel: int = 1) -> SearchResult:
    """First witness in deterministic order, or exhaustion with node count.

    A found witness is re-verified against all constraints before being
    returned; exhaustion attaches the parity certificate when applicable.
    """
    witnesses, nodes = _search(rs, first_only=True, parallel=parallel)
    if witnesses:
        witness = witnesses[0]
        assert verify_assignment(rs, witness), "witness failed re-verification"
        return Exists(witness, nodes)
    cert = parity_certificate(rs)
    return Nonexistent(nodes, cert if isinstance(cert, ParityCertificate) else None)


def enumerate_assignments(rs: RaySet, *, parallel: int = 1) -> Enumeration:
    """All witnesses over the full tree, each re-verified."""
    witnesses, nodes = _search(rs, first_only=False, parallel=parallel)
    for w in witnesses:
        assert verify_assignment(rs, w), "witness failed re-verification"
    return Enumeration(tuple(witnesses), nodes)


def parity_certificate(rs: RaySet) -> ParityCertificate | NotApplicable:
    """Counting certificate of nonexistence.

    Applicable iff every ray occurs in an even number of contexts and the
    number of contexts is odd; then the total number of 1s over all
    contexts would be both odd (one per context) and even (even
    multiplicity per ray), which is impossible.
    """
    mult = rs.multiplicities()
    for i, m in enumerate(mult):
        if m % 2 != 0:
            return NotApplicable(
                f"ray {rs.ray_ids[i]!r} occurs in {m} context(s), an odd number"
            )
    if rs.n_contexts % 2 == 0:
        return NotApplicable(f"even number of contexts ({rs.n_contexts})")
    return ParityCertificate(rs.n_contexts, mult)


# --- built-in datasets ----------------------------------------------------------


# 18 rational rays in dim 4 forming 9 bases, every ray in exactly 2 of them.
_RAYS_18 = (
    (0, 0, 0, 1),
    (0, 0, 1, 0),
    (1, 1, 0, 0),
    (1, -1, 0, 0),
    (0, 1, 0, 0),
    (1, 0, 1, 0),
    (1, 0, -1, 0),
    (1, -1, 1, -1),
    (1, -1, -1, 1),
    (0, 0, 1, 1),
    (1, 1, 1, 1),
    (0, 1, 0, -1),
    (1, 0, 0, 1),
    (1, 0, 0, -1),
    (0, 1, -1, 0),
    (1, 1, -1, 1),
    (1, 1, 1, -1),
    (-1, 1, 1, 1),
)

_CONTEXTS_18 = (
    (0, 1, 2, 3),
    (0, 4, 5, 6),
    (7, 8, 2, 9),
    (7, 10, 6, 11),
    (1, 4, 12, 13),
    (8, 10, 13, 14),
    (15, 16, 3, 9),
    (15, 17, 5, 11),
    (16, 17, 12, 14),
)


def _cabello18() -> RaySet:
    rays = [Vector.of(t) for t in _RAYS_18]
    return validate_rayset(4, rays, _CONTEXTS_18)


def _peres24() -> RaySet:
    """The 24 rays with components in {0, +-1} closed under the standard
    dim-4 square of observables; contexts are all complete orthogonal
    tetrads among them (computed, deterministically ordered)."""
    rays: list[tuple[int, int, int, int]] = []
    for axis in range(4):
        rays.append(tuple(1 if i == axis else 0 for i in range(4)))
    for i in range(4):
        for j in range(i + 1, 4):
            for sign in (1, -1):
                vec = [0, 0, 0, 0]
                vec[i] = 1
                vec[j] = sign
                rays.append(tuple(vec))
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                rays.append((1, s1, s2, s3))
    vectors = [Vector.of(t) for t in rays]
    n = len(vectors)
    nonorth = [
        [not inner(vectors[i], vectors[j]).is_zero() for j in range(n)]
        for i in range(n)
    ]
    contexts = []
    for a in range(n):
        for b in range(a + 1, n):
            if nonorth[a][b]:
                continue
            for c in range(b + 1, n):
                if nonorth[a][c] or nonorth[b][c]:
                    continue
                for d in range(c + 1, n):
                    if not (nonorth[a][d] or nonorth[b][d] or nonorth[c][d]):
                        contexts.append((a, b, c, d))
    return validate_rayset(4, vectors, contexts)


def _spin_dirs(n: int) -> RaySet:
    """n two-ray bases from distinct rational directions: {(1, k), (-k, 1)}.

    No two rays from different bases are orthogonal (1 + jk > 0 and
    j - k != 0 for j != k), so the contexts impose no joint constraints.
    """
    if n < 1:
        raise UnknownDataset("spin-dirs needs n >= 1")
    rays = []
    contexts = []
    for k in range(n):
        rays.append(Vector.of([1, k]))
        rays.append(Vector.of([-k, 1]))
        contexts.append((2 * k, 2 * k + 1))
    return validate_rayset(2, rays, contexts)


def _s1s2_dim3() -> RaySet:
    rays = [
        Vector.of([1, 0, 0]),
        Vector.of([0, 1, 0]),
        Vector.of([0, 0, 1]),
        Vector.of([0, 1, 1]),
        Vector.of([0, 1, -1]),
    ]
    ids = ["A", "B", "C", "D", "E"]
    return validate_rayset(3, rays, [(0, 1, 2), (0, 3, 4)], ids)


_SPIN_DIRS_RE = re.compile(r"^spin-dirs\((\d+)\)$")


@lru_cache(maxsize=None)
def builtin_dataset(name: str) -> RaySet:
    """Named exact datasets: "cabello18", "peres24", "spin-dirs(n)",
    "s1s2-dim3"."""
    if name == "cabello18":
        return _cabello18()
    if name == "peres24":
        return _peres24()
    if name == "s1s2-dim3":
        return _s1s2_dim3()
    m = _SPIN_DIRS_RE.match(name)
    if m:
        return _spin_dirs(int(m.group(1)))
    raise UnknownDataset(f"no built-in dataset named {name!r}")


BUILTIN_DATASET_NAMES = ("cabello18", "peres24", "spin-dirs(n)", "s1s2-dim3")


# --- JSON codecs -----------------------------------------------------------------


def rayset_to_json(rs: RaySet) -> dict:
    return {
        "dim": rs.dim,
        "rays": [
            {"id": rid, "vector": vector_to_json(v)}
            for rid, v in zip(rs.ray_ids, rs.rays)
        ],
        "contexts": [[rs.ray_ids[r] for r in ctx] for ctx in rs.contexts],
    }


def rayset_from_json(obj: object) -> RaySet:
    if not isinstance(obj, dict) or "rays" not in obj or "contexts" not in obj:
        raise ParseError("ray-set file must be an object with 'rays' and 'contexts'")
    if "dim" not in obj or not isinstance(obj["dim"], int):
        raise ParseError("ray-set file needs an integer 'dim'")
    dim = obj["dim"]
    raw_rays = obj["rays"]
    if not isinstance(raw_rays, list) or not raw_rays:
        raise ParseError("'rays' must be a non-empty list")
    ids: list[str] = []
    vectors: list[Vector] = []
    for entry in raw_rays:
        if not isinstance(entry, dict) or "id" not in entry or "vector" not in entry:
            raise ParseError("each ray needs 'id' and 'vector'")
        rid = str(entry["id"])
        if rid in ids:
            raise ParseError(f"duplicate ray id {rid!r}")
        ids.append(rid)
        vectors.append(vector_from_json(entry["vector"]))
    index_of = {rid: i for i, rid in enumerate(ids)}
    contexts: list[list[int]] = []
    for ctx in obj["contexts"]:
        if not isinstance(ctx, list):
            raise ParseError("each context must be a list of ray ids")
        try:
            contexts.append([index_of[str(r)] for r in ctx])
        except KeyError as exc:
            raise ParseError(f"context references unknown ray id {exc.args[0]!r}") from None
    return validate_rayset(dim, vectors, contexts, ids)


def certificate_to_json(rs: RaySet, cert: ParityCertificate) -> dict:
    return {
        "kind": "parity",
        "context_count": cert.context_count,
        "multiplicities": dict(zip(rs.ray_ids, cert.multiplicities)),
    }
