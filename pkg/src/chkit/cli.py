"""Command-line front end.

Subcommands delegate to the core modules and print one report per run:
human text by default, machine-readable JSON with --output json or
CHKIT_OUTPUT=json.  Identical inputs produce byte-identical JSON reports.

Exit codes: 0 = the command ran and produced its semantic result (an
"incompatible" verdict is a result, not an error); 1 = input or
validation error; 2 = the --expect assertion failed.

Float ray import: ray-set files may carry float vector entries (a number,
or an [re, im] pair); --snap-tol maps them to exact field elements a +
b*sqrt2 via integer-relation detection and refuses when the residual
exceeds the tolerance.  The core never sees a float.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

import mpmath

from . import classical, events, frameworks, hilbert, nogo
from .errors import ChkitError, ParseError, SnapError, UnknownDemo
from .exactnum import Scalar

_EXIT_OK = 0
_EXIT_INPUT = 1
_EXIT_EXPECT = 2

_DEFAULT_SNAP_TOL = 1e-9


# --- float snapping (the only lossy path; CLI-only by design) -----------------


def _snap_real(x: float, tol: float) -> Scalar:
    """Snap a float to a + b*sqrt2 with small rational a, b."""
    if x == 0.0:
        return Scalar()
    with mpmath.workdps(30):
        rel = mpmath.pslq(
            [mpmath.mpf(x), mpmath.mpf(1), mpmath.sqrt(2)],
            tol=mpmath.mpf(10) ** -12,
            maxcoeff=10**9,
        )
    if rel is not None and rel[0] != 0:
        a = Fraction(-rel[1], rel[0])
        b = Fraction(-rel[2], rel[0])
        if abs(x - (float(a) + float(b) * 2**0.5)) <= tol:
            return Scalar(a, b)
    approx = Fraction(x).limit_denominator(10**12)
    if abs(x - float(approx)) <= tol:
        return Scalar(approx)
    raise SnapError(f"cannot snap {x!r} to the exact field within tolerance {tol}")


def _snap_entry(entry: object, tol: float) -> list[str]:
    """Normalize one ray-vector entry to the exact 4-string encoding."""
    if isinstance(entry, list) and len(entry) == 4 and all(
        isinstance(p, str) for p in entry
    ):
        return list(entry)
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        s = _snap_real(float(entry), tol)
        return s.to_strings()
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in entry)
    ):
        re_part = _snap_real(float(entry[0]), tol)
        im_part = _snap_real(float(entry[1]), tol)
        return Scalar(re_part.a, re_part.b, im_part.a, im_part.b).to_strings()
    raise ParseError(f"bad ray vector entry: {entry!r}")


def _snap_rayset_json(obj: object, tol: float) -> object:
    if not isinstance(obj, dict) or not isinstance(obj.get("rays"), list):
        return obj
    rays = []
    for entry in obj["rays"]:
        if isinstance(entry, dict) and isinstance(entry.get("vector"), list):
            entry = dict(entry)
            entry["vector"] = [_snap_entry(e, tol) for e in entry["vector"]]
        rays.append(entry)
    out = dict(obj)
    out["rays"] = rays
    return out


# --- report plumbing -----------------------------------------------------------


def _load_json(path: str) -> object:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _output_mode(args: argparse.Namespace) -> str:
    if getattr(args, "output", None):
        return args.output
    env = os.environ.get("CHKIT_OUTPUT", "").strip().lower()
    return env if env in ("text", "json") else "text"


def _emit(report: dict, mode: str) -> None:
    if mode == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_render_text(report))


def _event_literal(mask: frozenset[int], n_cells: int) -> str:
    if not mask:
        return "0"
    if len(mask) == n_cells:
        return "I"
    return ",".join(str(k) for k in sorted(mask))


# --- command handlers ------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> tuple[dict, int]:
    report: dict = {"command": "validate", "path": args.file}
    try:
        obj = _load_json(args.file)
        if not isinstance(obj, dict):
            raise ParseError("input must be a JSON object")
        if "rays" in obj:
            obj = _snap_rayset_json(obj, args.snap_tol)
            rs = nogo.rayset_from_json(obj)
            counts = dict(zip(rs.ray_ids, rs.multiplicities()))
            report["kind"] = "rayset"
            report["summary"] = {
                "dim": rs.dim,
                "n_rays": rs.n_rays,
                "n_contexts": rs.n_contexts,
                "ray_context_counts": counts,
            }
        elif "frameworks" in obj:
            s = frameworks.framework_set_from_json(obj)
            report["kind"] = "framework-set"
            report["summary"] = {
                "dim": s.dim,
                "labels": s.labels(),
                "n_cells": {f.label: f.n_cells for f in s.frameworks},
            }
        elif "points" in obj:
            g = classical.partition_from_json(obj)
            report["kind"] = "partition"
            report["summary"] = {
                "n_points": len(g.space),
                "n_cells": g.n_cells,
                "cell_sizes": [len(c) for c in g.cells],
            }
        elif "cells" in obj:
            d = hilbert.decomposition_from_json(obj)
            report["kind"] = "decomposition"
            report["summary"] = {
                "dim": d.dim,
                "n_cells": d.n_cells,
                "ranks": [p.rank for p in d.cells],
            }
        else:
            raise ParseError("unrecognized file kind")
    except ChkitError as exc:
        report["valid"] = False
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return report, _EXIT_INPUT
    report["valid"] = True
    return report, _EXIT_OK


def _cmd_algebra(args: argparse.Namespace) -> tuple[dict, int]:
    d = hilbert.decomposition_from_json(_load_json(args.file))
    algebra = events.EventAlgebra(d)
    report: dict = {
        "command": "algebra",
        "path": args.file,
        "dim": d.dim,
        "n_cells": d.n_cells,
        "n_events": algebra.n_events,
    }
    if args.cell is not None:
        if not 1 <= args.cell <= d.n_cells:
            raise ParseError(f"cell {args.cell} not in 1..{d.n_cells}")
        report["cell"] = args.cell
    if args.event is not None:
        ev = events.parse_event_literal(algebra, args.event)
        rank = sum(d.cells[k - 1].rank for k in ev.mask)
        report["event"] = {
            "literal": _event_literal(ev.mask, d.n_cells),
            "cells": sorted(ev.mask),
            "rank": rank,
        }
        if args.cell is not None:
            t = events.TruthFunctional(args.cell, algebra)
            report["truth"] = events.eval_truth(t, ev)
    return report, _EXIT_OK


def _cmd_compat(args: argparse.Namespace) -> tuple[dict, int]:
    s = frameworks.framework_set_from_json(_load_json(args.file))
    f1, f2 = _framework(s, args.label1), _framework(s, args.label2)
    report = {
        "command": "compat",
        "label1": args.label1,
        "label2": args.label2,
        "compatible": frameworks.is_compatible(f1, f2),
    }
    return report, _EXIT_OK


def _cmd_refine(args: argparse.Namespace) -> tuple[dict, int]:
    s = frameworks.framework_set_from_json(_load_json(args.file))
    fine, coarse = _framework(s, args.fine), _framework(s, args.coarse)
    report = {
        "command": "refine",
        "fine": args.fine,
        "coarse": args.coarse,
        "is_refinement": frameworks.is_refinement(fine, coarse),
    }
    return report, _EXIT_OK


def _cmd_truth(args: argparse.Namespace) -> tuple[dict, int]:
    s = frameworks.framework_set_from_json(_load_json(args.file))
    f = _framework(s, args.label)
    if not 1 <= args.cell <= f.n_cells:
        raise ParseError(f"cell {args.cell} not in 1..{f.n_cells} of {args.label!r}")
    t = f.truth_functional(args.cell)
    report: dict = {
        "command": "truth",
        "label": args.label,
        "cell": args.cell,
    }
    if f.algebra.n_events <= 64:
        report["values"] = {
            _event_literal(ev.mask, f.n_cells): events.eval_truth(t, ev)
            for ev in f.algebra.all_events()
        }
    if args.query is not None:
        ev = events.parse_event_literal(f.algebra, args.query)
        report["query"] = {
            "literal": _event_literal(ev.mask, f.n_cells),
            "value": events.eval_truth(t, ev),
        }
    return report, _EXIT_OK


def _cmd_efp(args: argparse.Namespace) -> tuple[dict, int]:
    s = frameworks.framework_set_from_json(_load_json(args.framework_file))
    fam = frameworks.family_from_json(s, _load_json(args.family_file))
    try:
        violation = frameworks.check_every_framework_principle(fam, s)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    report: dict = {"command": "efp", "consistent": violation is None}
    if violation is not None:
        report["violation"] = {
            "label1": violation.label1,
            "value1": violation.value1,
            "label2": violation.label2,
            "value2": violation.value2,
            "projector_rank": violation.projector.rank,
            "projector": hilbert.matrix_to_json(violation.projector.matrix),
        }
        return report, _EXIT_OK
    candidate = frameworks.build_universal_candidate(fam, s)
    report["candidate"] = {
        "defined_on": len(candidate.values),
        "conflicts": [_conflict_json(c) for c in candidate.conflicts],
    }
    return report, _EXIT_OK


def _conflict_json(c: frameworks.CandidateConflict) -> dict:
    out = {
        "kind": c.kind,
        "p": hilbert.matrix_to_json(c.p.matrix),
        "p_rank": c.p.rank,
    }
    if c.q is not None:
        out["q"] = hilbert.matrix_to_json(c.q.matrix)
        out["q_rank"] = c.q.rank
    return out


def _cmd_ks(args: argparse.Namespace) -> tuple[dict, int]:
    if (args.file is None) == (args.dataset is None):
        raise ParseError("ks needs exactly one of FILE or --dataset")
    if args.dataset is not None:
        rs = nogo.builtin_dataset(args.dataset)
        source: dict = {"dataset": args.dataset}
    else:
        obj = _snap_rayset_json(_load_json(args.file), args.snap_tol)
        rs = nogo.rayset_from_json(obj)
        source = {"path": args.file}
    report: dict = {
        "command": "ks",
        **source,
        "dim": rs.dim,
        "n_rays": rs.n_rays,
        "n_contexts": rs.n_contexts,
    }
    if args.enumerate:
        enumeration = nogo.enumerate_assignments(rs, parallel=args.parallel)
        report["outcome"] = "exists" if enumeration.witnesses else "nonexistent"
        report["nodes_explored"] = enumeration.nodes_explored
        report["n_witnesses"] = len(enumeration.witnesses)
        report["witnesses"] = [w.by_id(rs) for w in enumeration.witnesses]
    else:
        result = nogo.search_assignment(rs, parallel=args.parallel)
        if isinstance(result, nogo.Exists):
            report["outcome"] = "exists"
            report["nodes_explored"] = result.nodes_explored
            report["assignment"] = result.assignment.by_id(rs)
        else:
            report["outcome"] = "nonexistent"
            report["nodes_explored"] = result.nodes_explored
            report["assignment"] = None
            if result.certificate is not None:
                report["certificate"] = {
                    "applicable": True,
                    **nogo.certificate_to_json(rs, result.certificate),
                }
    if args.certificate and "certificate" not in report:
        cert = nogo.parity_certificate(rs)
        if isinstance(cert, nogo.ParityCertificate):
            report["certificate"] = {
                "applicable": True,
                **nogo.certificate_to_json(rs, cert),
            }
        else:
            report["certificate"] = {"applicable": False, "reason": cert.reason}
    exit_code = _EXIT_OK
    if args.expect is not None:
        report["expect"] = args.expect
        wanted = "exists" if args.expect == "exists" else "nonexistent"
        report["expect_match"] = report["outcome"] == wanted
        if not report["expect_match"]:
            exit_code = _EXIT_EXPECT
    return report, exit_code


def _framework(s: frameworks.FrameworkSet, label: str) -> frameworks.Framework:
    if label not in s.by_label:
        raise ParseError(f"no framework labeled {label!r}")
    return s[label]


# --- demos -------------------------------------------------------------------------


def _demo_spin_half() -> dict:
    sz = hilbert.projector_from_ray(hilbert.Vector.of([1, 0]))
    sx = hilbert.projector_from_ray(hilbert.Vector.of([1, 1]))
    conj = frameworks.conjunction(sx, sz)
    fz = frameworks.Framework(
        "Sz", hilbert.validate_decomposition([sz, hilbert.complement(sz)])
    )
    session = frameworks.session_open(fz)
    session.assert_cell(1)
    queries = [
        ("Sz=+1/2", session.query(sz).value),
        ("Sz=-1/2", session.query(hilbert.complement(sz)).value),
        ("Sx=+1/2", session.query(sx).value),
    ]
    return {
        "command": "demo",
        "name": "spin-half",
        "commutes": hilbert.commutes(sx, sz),
        "conjunction": "MEANINGLESS"
        if isinstance(conj, frameworks.Meaningless)
        else "projector",
        "framework": "Sz",
        "asserted": "Sz=+1/2",
        "queries": [{"about": about, "answer": answer} for about, answer in queries],
    }


_S0S1S2_CELL_NAMES = {"S0": ["A", "~A"], "S1": ["A", "B", "C"], "S2": ["A", "D", "E"]}


def _demo_s0s1s2() -> dict:
    s = frameworks.s0s1s2_frameworks()
    s0, s1, s2 = s["S0"], s["S1"], s["S2"]
    compatibility = {
        "S0,S1": frameworks.is_compatible(s0, s1),
        "S0,S2": frameworks.is_compatible(s0, s2),
        "S1,S2": frameworks.is_compatible(s1, s2),
    }
    refinements = {
        "S1->S0": frameworks.is_refinement(s1, s0),
        "S2->S0": frameworks.is_refinement(s2, s0),
        "S1->S2": frameworks.is_refinement(s1, s2),
    }

    def propagation(coarse_cell: int) -> dict:
        result = frameworks.refine_truth(s0.truth_functional(coarse_cell), s1)
        entry: dict = {
            "true_in_S0": _S0S1S2_CELL_NAMES["S0"][coarse_cell - 1],
            "into": "S1",
        }
        if isinstance(result, frameworks.UniqueTruth):
            entry["unique"] = _S0S1S2_CELL_NAMES["S1"][
                result.functional.selected_cell - 1
            ]
        else:
            entry["candidates"] = sorted(
                _S0S1S2_CELL_NAMES["S1"][k - 1] for k in result.cells
            )
        return entry

    pair = frameworks.FrameworkSet([s1, s2])
    violating = frameworks.TruthAssignmentFamily.from_cells(pair, {"S1": 2, "S2": 1})
    violation = frameworks.check_every_framework_principle(violating, pair)
    assert violation is not None
    consistent = frameworks.TruthAssignmentFamily.from_cells(pair, {"S1": 2, "S2": 2})
    candidate = frameworks.build_universal_candidate(consistent, pair)
    cell_name = _projector_namer(s)
    conflicts = [
        {
            "kind": c.kind,
            "p": cell_name(c.p),
            "q": cell_name(c.q) if c.q is not None else None,
        }
        for c in candidate.conflicts
    ]
    containing = {
        name: sorted(frameworks.frameworks_containing(proj, s))
        for name, proj in (
            ("A", s1.cell(1)),
            ("B", s1.cell(2)),
            ("D", s2.cell(2)),
        )
    }
    return {
        "command": "demo",
        "name": "s0s1s2",
        "cells": _S0S1S2_CELL_NAMES,
        "compatibility": compatibility,
        "refinements": refinements,
        "truth_propagation": [propagation(1), propagation(2)],
        "efp_violation": {
            "family": {"S1": "B", "S2": "A"},
            "label1": violation.label1,
            "value1": violation.value1,
            "label2": violation.label2,
            "value2": violation.value2,
            "projector_rank": violation.projector.rank,
        },
        "candidate_family": {"S1": "B", "S2": "D"},
        "candidate_conflicts": conflicts,
        "frameworks_containing": containing,
    }


def _projector_namer(s: frameworks.FrameworkSet):
    names: dict[object, str] = {}
    for f in s.frameworks:
        cell_names = _S0S1S2_CELL_NAMES[f.label]
        for ev in f.algebra.all_events():
            m = f.decomposition.realize_event(ev.mask)
            label = "+".join(cell_names[k - 1] for k in sorted(ev.mask)) or "0"
            names.setdefault(m, label)

    def name(p: hilbert.Projector) -> str:
        return names.get(p.matrix, f"rank-{p.rank}")

    return name


def _demo_classical_oscillator(args: argparse.Namespace) -> dict:
    n = args.grid
    extent = Fraction(args.extent)
    e0 = Fraction(args.e0)
    space = classical.oscillator_grid(n, extent)
    ellipse = classical.energy_indicator(space, e0)
    if args.q is None:
        qx, qp = Fraction(0), Fraction(0)
    else:
        try:
            xs, ps = args.q.split(",")
            qx, qp = Fraction(xs.strip()), Fraction(ps.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad --q literal {args.q!r}") from exc
    q = next(
        (pid for pid in space.points if space.coords_of(pid) == (qx, qp)),
        None,
    )
    if q is None:
        raise ParseError(f"({qx}, {qp}) is not a grid point")
    inside = ellipse.subset
    g_inout = classical.CoarseGraining(
        space, [inside, space.point_set - inside]
    )
    bands = []
    for lo, hi in ((0, e0 / 2), (e0 / 2, e0), (e0, 2 * e0), (2 * e0, None)):
        cell = {
            pid
            for pid in space.points
            if classical.oscillator_energy(space, pid) >= lo
            and (hi is None or classical.oscillator_energy(space, pid) < hi)
        }
        if cell:
            bands.append(cell)
    g_bands = classical.CoarseGraining(space, bands)
    restr_inout = classical.restrict_universal(q, g_inout)
    restr_bands = classical.restrict_universal(q, g_bands)
    below_e0 = frozenset(
        k
        for k, cell in enumerate(g_bands.cells, start=1)
        if all(classical.oscillator_energy(space, pid) < e0 for pid in cell)
    )
    rows = []
    for name, indicator, ev_inout_mask, ev_bands_mask in (
        ("ellipse", ellipse, frozenset({1}), below_e0),
        ("complement", ellipse.complement(), frozenset({2}),
         frozenset(range(1, g_bands.n_cells + 1)) - below_e0),
        ("identity", classical.Indicator(space, space.point_set),
         frozenset({1, 2}), frozenset(range(1, g_bands.n_cells + 1))),
        ("zero", classical.Indicator(space, ()), frozenset(), frozenset()),
    ):
        rows.append(
            {
                "event": name,
                "universal": classical.universal_truth(q, indicator),
                "via_inout": events.eval_truth(
                    restr_inout, events.Event(ev_inout_mask, g_inout.algebra)
                ),
                "via_bands": events.eval_truth(
                    restr_bands, events.Event(ev_bands_mask, g_bands.algebra)
                ),
            }
        )
    agreement = all(r["universal"] == r["via_inout"] == r["via_bands"] for r in rows)
    return {
        "command": "demo",
        "name": "classical-oscillator",
        "grid": n,
        "extent": str(extent),
        "e0": str(e0),
        "n_points": len(space),
        "inside_count": len(inside),
        "q": f"{qx},{qp}",
        "q_cell_inout": g_inout.cell_of(q),
        "q_cell_bands": g_bands.cell_of(q),
        "band_sizes": [len(c) for c in g_bands.cells],
        "truth_table": rows,
        "restriction_agreement": agreement,
    }


def _demo_ks(name: str, parallel: int) -> dict:
    rs = nogo.builtin_dataset(name)
    result = nogo.search_assignment(rs, parallel=parallel)
    cert = nogo.parity_certificate(rs)
    report: dict = {
        "command": "demo",
        "name": name,
        "dim": rs.dim,
        "n_rays": rs.n_rays,
        "n_contexts": rs.n_contexts,
        "outcome": "exists" if isinstance(result, nogo.Exists) else "nonexistent",
        "nodes_explored": result.nodes_explored,
    }
    if isinstance(cert, nogo.ParityCertificate):
        report["certificate"] = {
            "applicable": True,
            **nogo.certificate_to_json(rs, cert),
        }
    else:
        report["certificate"] = {"applicable": False, "reason": cert.reason}
    return report


def _cmd_demo(args: argparse.Namespace) -> tuple[dict, int]:
    if args.name == "spin-half":
        return _demo_spin_half(), _EXIT_OK
    if args.name == "s0s1s2":
        return _demo_s0s1s2(), _EXIT_OK
    if args.name == "classical-oscillator":
        return _demo_classical_oscillator(args), _EXIT_OK
    if args.name in ("cabello18", "peres24"):
        return _demo_ks(args.name, args.parallel), _EXIT_OK
    raise UnknownDemo(f"no demo named {args.name!r}")


# --- text rendering -----------------------------------------------------------------


def _render_text(report: dict) -> str:
    lines: list[str] = []
    command = report.get("command", "?")
    if "error" in report and command != "validate":
        err = report["error"]
        return f"{command}: error [{err['type']}] {err['message']}"
    if command == "validate":
        if report.get("valid"):
            lines.append(f"valid {report['kind']}: {report['path']}")
            for key, value in sorted(report.get("summary", {}).items()):
                if not isinstance(value, dict):
                    lines.append(f"  {key}: {value}")
        else:
            err = report["error"]
            lines.append(f"invalid: {report['path']}")
            lines.append(f"  [{err['type']}] {err['message']}")
    elif command == "algebra":
        lines.append(
            f"algebra over {report['n_cells']} cells (dim {report['dim']}): "
            f"{report['n_events']} events"
        )
        if "event" in report:
            ev = report["event"]
            lines.append(f"  event {ev['literal']}: rank {ev['rank']}")
        if "truth" in report:
            lines.append(f"  truth under cell {report['cell']}: {report['truth']}")
    elif command == "compat":
        verdict = "compatible" if report["compatible"] else "incompatible"
        lines.append(f"{report['label1']} and {report['label2']}: {verdict}")
    elif command == "refine":
        verdict = "refines" if report["is_refinement"] else "does not refine"
        lines.append(f"{report['fine']} {verdict} {report['coarse']}")
    elif command == "truth":
        lines.append(f"truth functional: cell {report['cell']} of {report['label']}")
        if "query" in report:
            q = report["query"]
            lines.append(f"  {q['literal']}: {q['value']}")
        elif "values" in report:
            for literal, value in report["values"].items():
                lines.append(f"  {literal}: {value}")
    elif command == "efp":
        if report["consistent"]:
            cand = report["candidate"]
            lines.append("every-framework agreement: consistent")
            lines.append(f"  candidate defined on {cand['defined_on']} projectors")
            if cand["conflicts"]:
                for c in cand["conflicts"]:
                    lines.append(f"  conflict: {c['kind']}")
            else:
                lines.append("  no modified-condition conflicts")
        else:
            v = report["violation"]
            lines.append("every-framework agreement: VIOLATION")
            lines.append(
                f"  {v['label1']} assigns {v['value1']}, "
                f"{v['label2']} assigns {v['value2']} "
                f"(rank-{v['projector_rank']} projector)"
            )
    elif command == "ks":
        src = report.get("dataset") or report.get("path")
        outcome = "Exists" if report["outcome"] == "exists" else "Nonexistent"
        lines.append(
            f"{src}: {outcome} "
            f"({report['n_rays']} rays, {report['n_contexts']} contexts, "
            f"dim {report['dim']}; {report['nodes_explored']} nodes)"
        )
        if report.get("assignment"):
            ones = sorted(k for k, v in report["assignment"].items() if v == 1)
            lines.append(f"  true rays: {', '.join(ones)}")
        if "n_witnesses" in report:
            lines.append(f"  witnesses: {report['n_witnesses']}")
        cert = report.get("certificate")
        if cert is not None:
            if cert["applicable"]:
                lines.append(
                    f"  parity certificate: {cert['context_count']} contexts, "
                    "all ray multiplicities even"
                )
            else:
                lines.append(f"  parity certificate: not applicable ({cert['reason']})")
        if "expect" in report:
            verdict = "match" if report["expect_match"] else "MISMATCH"
            lines.append(f"  expected {report['expect']}: {verdict}")
    elif command == "demo":
        lines.extend(_render_demo_text(report))
    else:
        lines.append(json.dumps(report, sort_keys=True))
    return "\n".join(lines)


def _render_demo_text(report: dict) -> list[str]:
    name = report["name"]
    lines = [f"demo {name}"]
    if name == "spin-half":
        lines.append(f"  commutes(Sx=+1/2, Sz=+1/2): {report['commutes']}")
        lines.append(f"  conjunction: {report['conjunction']}")
        lines.append(f"  session on {report['framework']}, {report['asserted']} asserted:")
        for q in report["queries"]:
            lines.append(f"    query {q['about']}: {q['answer']}")
    elif name == "s0s1s2":
        for pair, compatible in report["compatibility"].items():
            verdict = "compatible" if compatible else "incompatible"
            lines.append(f"  {pair}: {verdict}")
        for prop in report["truth_propagation"]:
            if "unique" in prop:
                lines.append(
                    f"  {prop['true_in_S0']} true in S0 -> {prop['into']}: "
                    f"unique {prop['unique']}"
                )
            else:
                lines.append(
                    f"  {prop['true_in_S0']} true in S0 -> {prop['into']}: "
                    f"candidates {prop['candidates']}"
                )
        v = report["efp_violation"]
        lines.append(
            f"  family (S1={v['family']['S1']}, S2={v['family']['S2']}): "
            f"violation, {v['label1']}={v['value1']} vs {v['label2']}={v['value2']}"
        )
        for c in report["candidate_conflicts"]:
            lines.append(f"  candidate conflict: {c['kind']} on ({c['p']}, {c['q']})")
    elif name == "classical-oscillator":
        lines.append(
            f"  grid {report['grid']}x{report['grid']}, extent {report['extent']}, "
            f"E0 {report['e0']}"
        )
        lines.append(
            f"  points inside the ellipse: {report['inside_count']} of "
            f"{report['n_points']}"
        )
        lines.append(f"  q = ({report['q']}), band cell {report['q_cell_bands']}")
        for row in report["truth_table"]:
            lines.append(
                f"    {row['event']}: universal {row['universal']}, "
                f"in/out {row['via_inout']}, bands {row['via_bands']}"
            )
        lines.append(f"  restrictions agree: {report['restriction_agreement']}")
    else:
        outcome = "Exists" if report["outcome"] == "exists" else "Nonexistent"
        lines.append(
            f"  {outcome} ({report['n_contexts']} contexts, "
            f"{report['nodes_explored']} nodes)"
        )
        cert = report["certificate"]
        if cert["applicable"]:
            lines.append("  parity certificate: applicable, agrees")
        else:
            lines.append(f"  parity certificate: not applicable ({cert['reason']})")
    return lines


# --- parser -----------------------------------------------------------------------


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; 2 is reserved for
    # --expect mismatches here, so usage errors become exit 1 instead.
    def error(self, message: str):  # type: ignore[override]
        raise _UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output",
        choices=("text", "json"),
        default=None,
        help="report format (default: CHKIT_OUTPUT or text)",
    )
    parser = _Parser(
        prog="chkit",
        description="Exact single-time quantum logic toolkit: projectors, "
        "frameworks, truth functionals, and noncontextuality search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate an input file")
    p.add_argument("file")
    p.add_argument("--snap-tol", type=float, default=_DEFAULT_SNAP_TOL)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser(
        "algebra", parents=[common], help="event algebra of a decomposition"
    )
    p.add_argument("file")
    p.add_argument("--cell", type=int, default=None)
    p.add_argument("--event", default=None, help='event literal, e.g. "1,3", "I", "0"')
    p.set_defaults(handler=_cmd_algebra)

    p = sub.add_parser("compat", parents=[common], help="framework compatibility")
    p.add_argument("file")
    p.add_argument("label1")
    p.add_argument("label2")
    p.set_defaults(handler=_cmd_compat)

    p = sub.add_parser("refine", parents=[common], help="refinement check")
    p.add_argument("file")
    p.add_argument("fine")
    p.add_argument("coarse")
    p.set_defaults(handler=_cmd_refine)

    p = sub.add_parser("truth", parents=[common], help="evaluate a truth functional")
    p.add_argument("file")
    p.add_argument("label")
    p.add_argument("cell", type=int)
    p.add_argument("--query", default=None, help="event literal to evaluate")
    p.set_defaults(handler=_cmd_truth)

    p = sub.add_parser(
        "efp", parents=[common], help="every-framework agreement check"
    )
    p.add_argument("framework_file")
    p.add_argument("family_file")
    p.set_defaults(handler=_cmd_efp)

    p = sub.add_parser(
        "ks", parents=[common], help="noncontextual-assignment search"
    )
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--dataset", default=None, help="built-in dataset name")
    p.add_argument("--enumerate", action="store_true", help="collect all witnesses")
    p.add_argument(
        "--certificate", action="store_true", help="include the parity certificate"
    )
    p.add_argument("--expect", choices=("exists", "none"), default=None)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--snap-tol", type=float, default=_DEFAULT_SNAP_TOL)
    p.set_defaults(handler=_cmd_ks)

    p = sub.add_parser("demo", parents=[common], help="run a built-in demo")
    p.add_argument(
        "name",
        help="spin-half | s0s1s2 | classical-oscillator | cabello18 | peres24",
    )
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--extent", default="2")
    p.add_argument("--e0", default="1")
    p.add_argument("--q", default=None, help='grid point as "x,p"')
    p.add_argument("--parallel", type=int, default=1)
    p.set_defaults(handler=_cmd_demo)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    mode = _output_mode(args)
    try:
        report, exit_code = args.handler(args)
    except ChkitError as exc:
        report = {
            "command": args.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(report, mode)
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    _emit(report, mode)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
