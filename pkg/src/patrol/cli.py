"""Command-line entry point: ``patrol <group> <verb> ...``.

Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for usage or
input errors and 3 when a search budget runs out. With ``--json`` stdout is
exactly one JSON object following :data:`VERDICT_SCHEMA`. Without it,
commands that produce a schedule or sequence print report lines as ``#``
comments followed by the artifact, so the output can be piped straight
into the matching ``verify`` verb.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import signal
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import circle, covering, fence, io, point, zigzag
from .point import BudgetExceeded
from .rational import RationalParseError, format_rational, parse_rational

POSITIVE = {"ok", "good", "found"}
NEGATIVE = {"violated", "bad", "none"}
EXIT_CODES = {**{s: 0 for s in POSITIVE}, **{s: 1 for s in NEGATIVE}, "unknown-budget": 3}

VERDICT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "patrol verdict",
    "type": "object",
    "required": ["command", "status", "certificate", "witness", "stats", "budgets", "details"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": sorted(POSITIVE | NEGATIVE | {"unknown-budget"})},
        "certificate": {"type": ["string", "null"]},
        "witness": {"type": ["object", "null"]},
        "stats": {"type": "object"},
        "budgets": {"type": "object"},
        "details": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"status": {"enum": sorted(POSITIVE)}}},
         "then": {"properties": {"certificate": {"type": "string"}}}},
        {"if": {"properties": {"status": {"enum": ["violated", "bad"]}}},
         "then": {"properties": {"witness": {"type": "object"}}}},
    ],
}

DEFAULT_MAX_STATES = 10**7
DEFAULT_MAX_LCM = covering.DEFAULT_LCM_BUDGET


class UsageError(Exception):
    pass


@dataclass
class Verdict:
    status: str
    certificate: str | None = None
    witness: dict | None = None
    stats: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in EXIT_CODES:
            raise ValueError(f"unknown status {self.status}")


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    if isinstance(v, dict):
        return " ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    return format_rational(v) if isinstance(v, Fraction) else str(v)


# ---------------------------------------------------------------------------
# input helpers


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _rationals(texts, args) -> list[Fraction]:
    out = []
    for t in texts:
        try:
            out.append(parse_rational(t, args.max_denominator))
        except RationalParseError as exc:
            raise UsageError(str(exc)) from None
    return out


def _positive_ints(texts, what="values") -> list[int]:
    try:
        vals = [int(t) for t in texts]
    except ValueError:
        raise UsageError(f"{what} must be integers") from None
    if not vals:
        raise UsageError(f"need at least one of {what}")
    if any(v <= 0 for v in vals):
        raise UsageError(f"{what} must be positive")
    return vals


def _pairs(texts) -> covering.CoveringSystem:
    pairs = []
    for t in texts:
        m, sep, r = t.partition(",")
        if not sep:
            raise UsageError(f"expected modulus,residue, got {t!r}")
        try:
            pairs.append((int(m), int(r)))
        except ValueError:
            raise UsageError(f"expected integers in {t!r}") from None
    if not pairs:
        raise UsageError("need at least one modulus,residue pair")
    try:
        return covering.CoveringSystem(tuple(pairs))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# point patrolling


def _point_instance(args) -> point.PointInstance:
    if args.file:
        insts = io.parse_point_instances(_read(args.file))
        if len(insts) != 1:
            raise UsageError("the instance file must hold exactly one 'point:' line")
        return insts[0]
    return point.PointInstance(tuple(_positive_ints(args.intervals, "intervals")))


def cmd_point_solve(args) -> Verdict:
    inst = _point_instance(args)
    res = point.solve_discretized(inst, args.max_states, prune_dominated=args.prune)
    stats = {"states": res.states}
    if res.status == "unknown-budget":
        return Verdict("unknown-budget", stats=stats)
    if res.good:
        return Verdict("good", res.schedule.to_text(), stats=stats,
                       details={"period": res.schedule.period})
    return Verdict("bad", witness={"exhausted_states": res.states,
                                   "reason": "no cycle in the cooldown graph"}, stats=stats)


def cmd_point_approx(args) -> Verdict:
    vals = _rationals(args.intervals, args)
    if not vals or any(v <= 0 for v in vals):
        raise UsageError("intervals must be positive rationals")
    res = point.approx_idle_2(vals)
    return Verdict("ok", res.schedule.to_text(),
                   details={"idle": res.idle, "y": res.y, "ticks": list(res.ticks)})


def cmd_point_optimal_idle(args) -> Verdict:
    vals = _rationals(args.intervals, args)
    if not vals or any(v <= 0 for v in vals):
        raise UsageError("intervals must be positive rationals")
    idle = point.optimal_idle_exact(vals, args.max_states)
    inst = point.ceiling_instance(vals, idle)
    res = point.solve_discretized(inst, args.max_states)
    return Verdict("ok", res.schedule.to_text(),
                   details={"idle": idle, "integer_instance": list(inst.intervals)},
                   stats={"states": res.states})


def cmd_point_verify_1546(args) -> Verdict:
    threshold = _rationals([args.threshold], args)[0]
    rep = point.verify_minimal_candidates(args.bound, threshold, args.max_states)
    stats = {"candidates": rep.checked, "states": rep.states}
    details = {"bound": args.bound, "threshold": threshold}
    if rep.bad:
        return Verdict("violated", witness={"bad": [list(i.intervals) for i in rep.bad]},
                       stats=stats, details=details)
    if rep.unknown:
        details["unknown"] = [list(i.intervals) for i in rep.unknown]
        return Verdict("unknown-budget", stats=stats, details=details)
    return Verdict("ok", f"all {rep.checked} candidates good", stats=stats, details=details)


def cmd_point_bad_family(args) -> Verdict:
    inst = point.bad_family(args.k)
    res = point.solve_discretized(inst, args.max_states)
    details = {"instance": list(inst.intervals), "reciprocal_sum": inst.reciprocal_sum()}
    stats = {"states": res.states}
    if res.status == "unknown-budget":
        return Verdict("unknown-budget", stats=stats, details=details)
    if res.good:
        return Verdict("good", res.schedule.to_text(), stats=stats, details=details)
    return Verdict("bad", witness={"exhausted_states": res.states}, stats=stats, details=details)


# ---------------------------------------------------------------------------
# fence


def _fence_verdict(s: fence.FenceSchedule, args, extra: dict | None = None) -> Verdict:
    v = fence.verify_fence_coverage(s)
    if getattr(args, "svg", None):
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(io.fence_svg(s))
    details = {"length": s.length, "idle": s.idle, "period": s.period,
               "agents": len(s.agents), **(extra or {})}
    stats = {k: v.stats[k] for k in ("critical_x", "events", "pieces") if k in v.stats}
    if v.ok:
        return Verdict("ok", io.fence_schedule_text(s), stats=stats, details=details)
    x, t = v.witness
    return Verdict("violated", witness={"x": x, "t": t, "gap": v.max_gap},
                   stats=stats, details=details)


def cmd_fence_partition(args) -> Verdict:
    speeds = _rationals(args.speeds, args)
    if not speeds or any(v <= 0 for v in speeds):
        raise UsageError("speeds must be positive")
    return _fence_verdict(fence.partition_strategy(speeds), args)


def cmd_fence_build43(args) -> Verdict:
    if args.n < 1 or args.L < 1:
        raise UsageError("--n and --L must be positive")
    s = fence.build_43_schedule(args.n, args.L)
    base = fence.partition_length(args.n, args.L)
    return _fence_verdict(s, args, {"partition_length": base, "ratio": s.length / base})


def cmd_fence_verify(args) -> Verdict:
    return _fence_verdict(io.parse_fence_schedule(_read(args.file), args.max_denominator), args)


def cmd_fence_search(args) -> Verdict:
    speeds = _rationals(args.speeds, args)
    eps = _rationals([args.eps], args)[0]
    if not speeds or any(v <= 0 for v in speeds) or not 0 < eps < 1:
        raise UsageError("speeds must be positive and 0 < eps < 1")
    res = zigzag.zigzag_search(speeds, eps, max_blocks=args.max_blocks, budget=args.max_states)
    stats = {"explored": res.explored}
    details = {"length": res.length, "xi": res.params.xi, "block": res.params.block,
               "complete": res.complete}
    if not res.complete:
        return Verdict("unknown-budget", stats=stats, details=details)
    if res.schedule is None or res.length == 0:
        return Verdict("none", witness={"length": res.length}, stats=stats, details=details)
    if getattr(args, "svg", None):
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(io.fence_svg(res.schedule))
    return Verdict("found", io.fence_schedule_text(res.schedule), stats=stats, details=details)


# ---------------------------------------------------------------------------
# circle


def _circle_verdict(s: circle.CircleSchedule, extra: dict | None = None) -> Verdict:
    v = circle.verify_circle_coverage(s)
    details = {"perimeter": s.perimeter, "idle": s.idle, "period": s.period,
               "agents": len(s.agents), **(extra or {})}
    stats = {"method": v.stats.get("method", "sweep")}
    if v.ok:
        return Verdict("ok", io.circle_schedule_text(s), stats=stats, details=details)
    x, t = v.witness
    return Verdict("violated", witness={"x": x, "t": t}, stats=stats, details=details)


def cmd_circle_runners(args) -> Verdict:
    speeds = _rationals(args.speeds, args)
    try:
        perimeter, s = circle.runners_strategy(speeds)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _circle_verdict(s, {"runners_perimeter": perimeter})


def _ck_verdict(seq: circle.CKSequence) -> Verdict:
    v = circle.verify_ck(seq)
    details = {"c": seq.c, "k": seq.k, "period": seq.period}
    if v.ok:
        return Verdict("ok", seq.to_text(), details=details)
    return Verdict("violated", witness={"condition": v.condition, "set": v.index,
                                        "at": v.witness, "detail": v.detail}, details=details)


def cmd_circle_greedy(args) -> Verdict:
    c, grid, period = _rationals([args.c, args.grid, args.period], args)
    progress = None
    if args.progress:
        def progress(i, got, covered, total):
            print(f"# set {i}: +{got} cells, {covered}/{total} covered", file=sys.stderr, flush=True)
    try:
        res = circle.greedy_ck_search(c, grid, period, args.kmax, progress)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    details = {"c": c, "granularity": grid, "period": period, "k_max": args.kmax,
               "sets": len(res.sets), "covered_cells": res.covered_cells,
               "total_cells": res.total_cells, "stop": res.stop}
    if res.found:
        v = _ck_verdict(res.sequence)
        v.details.update(details)
        return v if v.status == "ok" else Verdict("violated", witness=v.witness, details=details)
    return Verdict("none", witness={"uncovered_cells": res.total_cells - res.covered_cells},
                   details=details)


def cmd_circle_verify_seq(args) -> Verdict:
    return _ck_verdict(io.parse_ck_sequence(_read(args.file), args.max_denominator))


def cmd_circle_seq_to_schedule(args) -> Verdict:
    seq = io.parse_ck_sequence(_read(args.file), args.max_denominator)
    v = circle.verify_ck(seq)
    if not v.ok:
        return Verdict("violated", witness={"condition": v.condition, "set": v.index,
                                            "at": v.witness, "detail": v.detail})
    return _circle_verdict(circle.ck_to_circle_schedule(seq), {"c": seq.c, "k": seq.k})


def cmd_circle_verify(args) -> Verdict:
    return _circle_verdict(io.parse_circle_schedule(_read(args.file), args.max_denominator))


def cmd_circle_schedule_to_seq(args) -> Verdict:
    s = io.parse_circle_schedule(_read(args.file), args.max_denominator)
    c = _rationals([args.c], args)[0] if args.c else s.perimeter
    try:
        seq = circle.circle_schedule_to_ck(s, c)
    except circle.CircleCoverageError as exc:
        x, t = exc.witness
        return Verdict("violated", witness={"x": x, "t": t, "detail": str(exc)})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _ck_verdict(seq)


# ---------------------------------------------------------------------------
# covering systems and prescribed times


def cmd_cover_dcs_find(args) -> Verdict:
    moduli = _positive_ints(args.moduli, "moduli")
    res = covering.find_dcs(moduli, args.max_lcm, args.max_states)
    if res is None:
        total = sum(Fraction(1, m) for m in moduli)
        return Verdict("none", witness={"reciprocal_sum": total, "exhaustive": True})
    return Verdict("found", " ".join(f"{m},{r}" for m, r in zip(moduli, res)),
                   details={"residues": list(res)})


def cmd_cover_dcs_check(args) -> Verdict:
    sys_ = _pairs(args.pairs)
    counts = covering.hit_counts(sys_, args.max_lcm)
    bad = next((x for x, c in enumerate(counts) if c != 1), None)
    if bad is None:
        return Verdict("ok", " ".join(f"{m},{r}" for m, r in sys_.pairs),
                       details={"lcm": len(counts)})
    return Verdict("violated", witness={"x": bad, "hits": counts[bad]}, details={"lcm": len(counts)})


def cmd_cover_drc_find(args) -> Verdict:
    moduli = _positive_ints(args.moduli, "moduli")
    res = covering.find_drc(moduli, args.max_states)
    if res is None:
        return Verdict("none", witness={"exhaustive": True})
    return Verdict("found", " ".join(f"{m},{r}" for m, r in zip(moduli, res)),
                   details={"residues": list(res)})


def cmd_cover_drc_check(args) -> Verdict:
    sys_ = _pairs(args.pairs)
    if covering.is_drc(sys_):
        return Verdict("ok", " ".join(f"{m},{r}" for m, r in sys_.pairs))
    for (i, (m1, r1)), (j, (m2, r2)) in ((a, b) for a in enumerate(sys_.pairs)
                                         for b in enumerate(sys_.pairs) if a[0] < b[0]):
        if (r1 - r2) % math.gcd(m1, m2) == 0:
            return Verdict("violated", witness={"classes": [i, j], "gcd": math.gcd(m1, m2)})
    raise AssertionError("unreachable")


def cmd_cover_reduce_vc(args) -> Verdict:
    g = io.parse_graph(_read(args.file))
    try:
        moduli = covering.vc_to_drc(g, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = covering.find_drc(moduli, args.max_states) if moduli else ()
    cover = covering.vertex_cover(g, args.k)
    details = {"moduli": list(moduli), "k": args.k, "vertex_cover": list(cover) if cover else None,
               "sides_agree": (res is not None) == (cover is not None)}
    if res is None:
        return Verdict("none", witness={"exhaustive": True}, details=details)
    return Verdict("found", " ".join(f"{m},{r}" for m, r in zip(moduli, res)), details=details)


def _gpp_verdict(inst: covering.GPPInstance, args, extra: dict | None = None) -> Verdict:
    res = covering.solve_gpp(inst, args.max_states)
    details = {"times": list(inst.times), "intervals": list(inst.intervals), **(extra or {})}
    if res is None:
        return Verdict("none", witness={"exhaustive": True}, details=details)
    return Verdict("found", " ".join(f"{t}:{i}" for t, i in sorted(res.items())), details=details)


def cmd_gpp_solve(args) -> Verdict:
    try:
        times = [int(t) for t in args.times]
    except ValueError:
        raise UsageError("times must be integers") from None
    if not times:
        raise UsageError("need at least one time")
    a = _positive_ints(args.intervals, "intervals")
    return _gpp_verdict(covering.GPPInstance(tuple(times), tuple(a)), args)


def cmd_gpp_reduce_3dm(args) -> Verdict:
    inst = io.parse_n3dm(_read(args.file))
    try:
        gpp = covering.n3dm_to_gpp(inst, args.M)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    match = covering.n3dm_matching(inst)
    v = _gpp_verdict(gpp, args, {"matching": [list(p) for p in match] if match else None})
    v.details["sides_agree"] = (v.status == "found") == (match is not None)
    return v


# ---------------------------------------------------------------------------
# reproduction recipes


def cmd_repro_fence43(args) -> Verdict:
    s = fence.build_43_schedule(args.n, args.L)
    v = fence.verify_fence_coverage(s)
    ratio = Fraction(args.L) / fence.partition_length(args.n, args.L)
    target = Fraction(127, 100)
    details = {"n": args.n, "L": args.L, "ratio": ratio, "ratio_float": float(ratio),
               "target": target, "verified": v.ok}
    if v.ok and ratio >= target:
        return Verdict("ok", f"ratio {ratio}", details=details)
    return Verdict("violated", witness={"verified": v.ok, "ratio": ratio}, details=details)


def cmd_repro_circle105(args) -> Verdict:
    c, grid, period = _rationals([args.c, args.grid, args.period], args)
    t0 = time.perf_counter()
    res = circle.greedy_ck_search(c, grid, period, args.kmax)
    details = {"c": c, "granularity": grid, "period": period, "k_max": args.kmax,
               "k_target": args.k_target, "sets": len(res.sets), "stop": res.stop,
               "covered_cells": res.covered_cells, "total_cells": res.total_cells}
    if args.timing:
        details["greedy_seconds"] = round(time.perf_counter() - t0, 1)
    if not res.found:
        return Verdict("violated", witness={"uncovered_cells": res.total_cells - res.covered_cells,
                                            "sets_built": len(res.sets)}, details=details)
    seq = res.sequence
    ck = circle.verify_ck(seq)
    sched = circle.ck_to_circle_schedule(seq) if ck.ok else None
    cv = circle.verify_circle_coverage(sched) if sched else None
    details.update(k=seq.k, sequence_ok=ck.ok, schedule_ok=bool(cv and cv.ok),
                   perimeter=sched.perimeter if sched else None)
    if ck.ok and cv and cv.ok and seq.k <= args.k_target:
        return Verdict("ok", seq.to_text(), details=details)
    return Verdict("violated", witness={"k": seq.k, "sequence_ok": ck.ok}, details=details)


def cmd_repro_f1546(args) -> Verdict:
    res = point.f_sequence_check(r_max=args.r_max)
    details = {"threshold": point.DEFAULT_THRESHOLD, "r_max": args.r_max,
               "minimum": res.minimum, "minimum_float": float(res.minimum), "argmin": res.argmin}
    rep = point.verify_minimal_candidates(args.bound, point.DEFAULT_THRESHOLD, args.max_states)
    details.update(bound=args.bound, candidates=rep.checked, all_good=rep.ok)
    stats = {"states": rep.states}
    if rep.unknown:
        return Verdict("unknown-budget", stats=stats, details=details)
    if res.ok and rep.ok:
        return Verdict("ok", f"min f = {res.minimum}", stats=stats, details=details)
    return Verdict("violated", witness={"f_ok": res.ok, "bad": [list(i.intervals) for i in rep.bad]},
                   stats=stats, details=details)


# ---------------------------------------------------------------------------
# parser and driver


def _common(p: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", default=d(False),
                   help="print one JSON verdict object")
    p.add_argument("--max-states", type=int, default=d(None),
                   help="search budget (default: $PATROL_BUDGET_STATES or 10^7)")
    p.add_argument("--max-lcm", type=int, default=d(DEFAULT_MAX_LCM), help="lcm budget")
    p.add_argument("--max-denominator", type=int, default=d(None),
                   help="accept decimal input, converted exactly, up to this denominator")
    p.add_argument("--timeout", type=float, default=d(None),
                   help="seconds before giving up with exit code 3")
    p.add_argument("--timing", action="store_true", default=d(False),
                   help="include wall time in the report (output is then not reproducible)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="patrol", description="Exact patrolling schedules and verifiers.")
    _common(root, True)
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def verb(group, name, func: Callable, help_: str):
        p = group.add_parser(name, help=help_)
        _common(p, False)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("point", help="patrolling a single point").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = verb(g, "solve", cmd_point_solve, "decide an integer instance")
    p.add_argument("intervals", nargs="*")
    p.add_argument("--file", help="instance file with one 'point:' line")
    p.add_argument("--prune", action="store_true", help="skip dominated cooldown states")
    p = verb(g, "approx", cmd_point_approx, "power-of-two schedule within factor 2")
    p.add_argument("intervals", nargs="+")
    p = verb(g, "optimal-idle", cmd_point_optimal_idle, "smallest feasible idle time")
    p.add_argument("intervals", nargs="+")
    p = verb(g, "verify-1546", cmd_point_verify_1546, "all minimal candidates are good")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--threshold", default=str(point.DEFAULT_THRESHOLD))
    p = verb(g, "bad-family", cmd_point_bad_family, "solve (2, 3, 5, .., 2^k + 1)")
    p.add_argument("k", type=int)

    g = groups.add_parser("fence", help="patrolling a segment").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = verb(g, "partition", cmd_fence_partition, "every agent sweeps its own segment")
    p.add_argument("speeds", nargs="+")
    p.add_argument("--svg")
    p = verb(g, "build43", cmd_fence_build43, "fast and slow shuttles on [0, L]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--svg")
    p = verb(g, "verify", cmd_fence_verify, "exact check of a schedule file")
    p.add_argument("file", nargs="?")
    p.add_argument("--svg")
    p = verb(g, "search", cmd_fence_search, "zigzag grid search")
    p.add_argument("speeds", nargs="+")
    p.add_argument("--eps", required=True)
    p.add_argument("--max-blocks", type=int)
    p.add_argument("--svg")

    g = groups.add_parser("circle", help="clockwise patrolling of a circle").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = verb(g, "runners", cmd_circle_runners, "equally spaced runners")
    p.add_argument("speeds", nargs="+")
    p = verb(g, "greedy", cmd_circle_greedy, "greedy interval-set sequence search")
    p.add_argument("--c", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--progress", action="store_true")
    p = verb(g, "verify-seq", cmd_circle_verify_seq, "check a sequence file")
    p.add_argument("file", nargs="?")
    p = verb(g, "seq-to-schedule", cmd_circle_seq_to_schedule, "schedule on perimeter c/2")
    p.add_argument("file", nargs="?")
    p = verb(g, "verify", cmd_circle_verify, "exact check of a schedule file")
    p.add_argument("file", nargs="?")
    p = verb(g, "schedule-to-seq", cmd_circle_schedule_to_seq, "covered-time sets of a schedule")
    p.add_argument("file", nargs="?")
    p.add_argument("--c")

    g = groups.add_parser("cover", help="covering systems and residue classes").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = verb(g, "dcs-find", cmd_cover_dcs_find, "residues partitioning the integers")
    p.add_argument("moduli", nargs="+")
    p = verb(g, "dcs-check", cmd_cover_dcs_check, "check m,r pairs cover exactly once")
    p.add_argument("pairs", nargs="+")
    p = verb(g, "drc-find", cmd_cover_drc_find, "pairwise disjoint residues")
    p.add_argument("moduli", nargs="+")
    p = verb(g, "drc-check", cmd_cover_drc_check, "check m,r pairs are disjoint")
    p.add_argument("pairs", nargs="+")
    p = verb(g, "reduce-vc", cmd_cover_reduce_vc, "vertex cover to disjoint residues")
    p.add_argument("file", nargs="?")
    p.add_argument("--k", type=int, required=True)

    g = groups.add_parser("gpp", help="patrolling prescribed times").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = verb(g, "solve", cmd_gpp_solve, "assign agents to times")
    p.add_argument("--times", nargs="+", required=True)
    p.add_argument("--intervals", nargs="+", required=True)
    p = verb(g, "reduce-3dm", cmd_gpp_reduce_3dm, "3-dimensional matching to prescribed times")
    p.add_argument("file", nargs="?")
    p.add_argument("--M", type=int)

    g = groups.add_parser("repro", help="reproduction recipes").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = verb(g, "fence43", cmd_repro_fence43, "shuttle construction against partitioning")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--L", type=int, default=200)
    p = verb(g, "circle105", cmd_repro_circle105, "greedy sequence at c = 2.1")
    p.add_argument("--c", default="21/10")
    p.add_argument("--grid", default="1/400")
    p.add_argument("--period", default="500")
    p.add_argument("--kmax", type=int, default=130)
    p.add_argument("--k-target", type=int, default=122)
    p = verb(g, "f1546", cmd_repro_f1546, "threshold sequence and minimal candidates")
    p.add_argument("--r-max", type=int, default=64)
    p.add_argument("--bound", type=int, default=8)
    return root


def _emit(cmd: str, v: Verdict, args, out) -> None:
    budgets = {"max_states": args.max_states, "max_lcm": args.max_lcm}
    if args.timeout is not None:
        budgets["timeout_s"] = args.timeout
    if args.json:
        obj = {"command": cmd, "status": v.status, "certificate": v.certificate,
               "witness": _jsonable(v.witness), "stats": _jsonable(v.stats),
               "budgets": budgets, "details": _jsonable(v.details)}
        out.write(json.dumps(obj, sort_keys=True) + "\n")
        return
    lines = [f"status: {v.status}"]
    for key, val in v.details.items():
        lines.append(f"{key}: {_fmt(val)}")
    if v.witness is not None:
        lines.append(f"witness: {_fmt(v.witness)}")
    for key, val in v.stats.items():
        lines.append(f"{key}: {_fmt(val)}")
    lines.append(f"budgets: {_fmt(budgets)}")
    artifact = v.certificate is not None and "\n" in v.certificate
    if artifact:
        out.write("".join(f"# {ln}\n" for ln in lines) + v.certificate)
    else:
        if v.certificate is not None:
            lines.append(f"certificate: {v.certificate}")
        out.write("\n".join(lines) + "\n")


def _on_alarm(signum, frame):
    raise BudgetExceeded("timeout")


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.max_states is None:
        env = os.environ.get("PATROL_BUDGET_STATES")
        try:
            args.max_states = int(env) if env else DEFAULT_MAX_STATES
        except ValueError:
            print(f"PATROL_BUDGET_STATES must be an integer, got {env!r}", file=sys.stderr)
            return 2
    cmd = f"{args.group} {args.verb}"
    if args.timeout:
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.timeout)
    try:
        v = args.func(args)
    except (UsageError, io.ParseError) as exc:
        print(f"patrol {cmd}: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        v = Verdict("unknown-budget", details={"reason": str(exc)})
    finally:
        if args.timeout:
            signal.setitimer(signal.ITIMER_REAL, 0)
    _emit(cmd, v, args, out)
    return EXIT_CODES[v.status]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
