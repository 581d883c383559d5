"""Text formats for instances, schedules and sequences.

Every parser reports problems as :class:`ParseError` with a 1-based line
and column. Rationals are exact ``p/q`` strings; decimals are accepted
only when a denominator bound is passed down.

Formats::

    point: 2 3 5
    period=4: 0 1 0 2
    fence L T P k              then per agent:  v=V period=Q t,x t,x ...
    circle L T P k             then per agent:  v=V period=Q drift=D t,x ...
    c=C k=K period=P granularity=G   then per set:  i: lo,hi lo,hi ...
    n m                        then m lines:  u v
    {"x": [..], "y": [..], "z": [..], "b": ..}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .circle import CircleSchedule, CKSequence
from .covering import N3DMInstance, TriangleFreeGraph
from .fence import FenceSchedule
from .point import PeriodicVisitSchedule, PointInstance
from .rational import PeriodicIntervalSet, RationalParseError, Trajectory, parse_rational


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col, self.message = line, col, message


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int

    def fail(self, message: str) -> ParseError:
        return ParseError(self.line, self.col, message)


def _lines(text: str) -> Iterator[tuple[int, list[_Tok]]]:
    """Non-blank, non-comment lines as token lists; ``key= value`` is glued."""
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [_Tok(m.group(), n, m.start() + 1) for m in re.finditer(r"\S+", body)]
        glued: list[_Tok] = []
        for t in toks:
            if glued and glued[-1].text.endswith("=") and "=" not in t.text:
                prev = glued.pop()
                t = _Tok(prev.text + t.text, prev.line, prev.col)
            glued.append(t)
        if glued:
            yield n, glued


def _rat(tok: _Tok, text: str | None = None, max_den: int | None = None) -> Fraction:
    try:
        return parse_rational(tok.text if text is None else text, max_den)
    except RationalParseError as exc:
        raise tok.fail(str(exc)) from None


def _int(tok: _Tok, text: str | None = None) -> int:
    s = tok.text if text is None else text
    try:
        return int(s)
    except ValueError:
        raise tok.fail(f"expected an integer, got {s!r}") from None


def _keyval(tok: _Tok, key: str) -> str:
    k, sep, v = tok.text.partition("=")
    if not sep or k != key:
        raise tok.fail(f"expected {key}=<value>, got {tok.text!r}")
    return v


def _pair(tok: _Tok, max_den: int | None) -> tuple[Fraction, Fraction]:
    a, sep, b = tok.text.partition(",")
    if not sep:
        raise tok.fail(f"expected a pair a,b, got {tok.text!r}")
    return _rat(tok, a, max_den), _rat(tok, b, max_den)


def _eof(text: str) -> ParseError:
    return ParseError(len(text.splitlines()) + 1, 1, "unexpected end of input")


# ---------------------------------------------------------------------------
# point patrolling


def parse_point_instances(text: str) -> list[PointInstance]:
    out = []
    for _, toks in _lines(text):
        head = toks[0]
        if head.text != "point:":
            raise head.fail("expected 'point:'")
        if len(toks) == 1:
            raise head.fail("need at least one interval")
        vals = []
        for t in toks[1:]:
            v = _int(t)
            if v <= 0:
                raise t.fail(f"interval must be positive, got {v}")
            vals.append(v)
        out.append(PointInstance(tuple(vals)))
    return out


def point_instance_text(inst: PointInstance) -> str:
    return "point: " + " ".join(map(str, inst.intervals))


def parse_visit_schedule(text: str) -> PeriodicVisitSchedule:
    for _, toks in _lines(text):
        head = toks[0]
        m = re.fullmatch(r"period=(\d+):", head.text)
        if not m:
            raise head.fail("expected 'period=C:'")
        assignment = tuple(_int(t) for t in toks[1:])
        if len(assignment) != int(m.group(1)):
            raise head.fail(f"period {m.group(1)} but {len(assignment)} entries")
        return PeriodicVisitSchedule(assignment)
    raise _eof(text)


# ---------------------------------------------------------------------------
# fence and circle schedules


def _trajectory_text(speed, tr: Trajectory, with_drift: bool) -> str:
    parts = [f"v={speed}", f"period={tr.period}"]
    if with_drift:
        parts.append(f"drift={tr.drift}")
    parts.extend(f"{t},{x}" for t, x in tr.breakpoints)
    return " ".join(parts)


def fence_schedule_text(s: FenceSchedule) -> str:
    lines = [f"fence {s.length} {s.idle} {s.period} {len(s.agents)}"]
    lines += [_trajectory_text(a.speed, a.trajectory, False) for a in s.agents]
    return "\n".join(lines) + "\n"


def circle_schedule_text(s: CircleSchedule) -> str:
    lines = [f"circle {s.perimeter} {s.idle} {s.period} {len(s.agents)}"]
    lines += [_trajectory_text(a.speed, a.trajectory, True) for a in s.agents]
    return "\n".join(lines) + "\n"


def _parse_agents(text: str, kind: str, max_den: int | None):
    rows = list(_lines(text))
    if not rows:
        raise _eof(text)
    head = rows[0][1]
    if head[0].text != kind or len(head) != 5:
        raise head[0].fail(f"expected header '{kind} L T P k'")
    size, idle, period = (_rat(t, max_den=max_den) for t in head[1:4])
    k = _int(head[4])
    if len(rows) - 1 != k:
        raise head[4].fail(f"header announces {k} agents, found {len(rows) - 1}")
    agents = []
    for _, toks in rows[1:]:
        speed = _rat(toks[0], _keyval(toks[0], "v"), max_den)
        if len(toks) < 2:
            raise toks[0].fail("missing period=")
        tr_period = _rat(toks[1], _keyval(toks[1], "period"), max_den)
        rest = toks[2:]
        drift = Fraction(0)
        if kind == "circle":
            if not rest:
                raise toks[1].fail("missing drift=")
            drift = _rat(rest[0], _keyval(rest[0], "drift"), max_den)
            rest = rest[1:]
        if not rest:
            raise toks[-1].fail("agent needs at least one t,x breakpoint")
        pts = tuple(_pair(t, max_den) for t in rest)
        try:
            tr = Trajectory(tr_period, pts, drift)
        except ValueError as exc:
            raise rest[0].fail(str(exc)) from None
        agents.append((speed, tr))
    return (size, idle, period), agents, head


def parse_fence_schedule(text: str, max_den: int | None = None) -> FenceSchedule:
    (length, idle, period), agents, head = _parse_agents(text, "fence", max_den)
    try:
        s = FenceSchedule.build(length, idle, agents)
        if period != s.period:
            s = FenceSchedule(s.length, s.idle, s.agents, period)
    except ValueError as exc:
        raise head[0].fail(str(exc)) from None
    return s


def parse_circle_schedule(text: str, max_den: int | None = None) -> CircleSchedule:
    (perimeter, idle, period), agents, head = _parse_agents(text, "circle", max_den)
    try:
        s = CircleSchedule.build(perimeter, idle, agents)
        if period != s.period:
            s = CircleSchedule(s.perimeter, s.idle, s.agents, period)
    except ValueError as exc:
        raise head[0].fail(str(exc)) from None
    return s


# ---------------------------------------------------------------------------
# (c, k)-sequences


def parse_ck_sequence(text: str, max_den: int | None = None) -> CKSequence:
    rows = list(_lines(text))
    if not rows:
        raise _eof(text)
    head = {}
    for tok in rows[0][1]:
        key, sep, val = tok.text.partition("=")
        if not sep or key not in ("c", "k", "period", "granularity"):
            raise tok.fail(f"unexpected header field {tok.text!r}")
        head[key] = (tok, val)
    for key in ("c", "k", "period"):
        if key not in head:
            raise rows[0][1][0].fail(f"header lacks {key}=")
    c = _rat(*head["c"], max_den)
    k = _int(*head["k"])
    period = _rat(*head["period"], max_den)
    gran = _rat(*head["granularity"], max_den) if "granularity" in head else None
    if len(rows) - 1 != k:
        raise head["k"][0].fail(f"header announces {k} sets, found {len(rows) - 1}")
    sets = []
    for expect, (_, toks) in enumerate(rows[1:], 1):
        label = toks[0]
        if label.text != f"{expect}:":
            raise label.fail(f"expected '{expect}:'")
        pairs = [_pair(t, max_den) for t in toks[1:]]
        if len(pairs) == 1 and pairs[0][1] - pairs[0][0] == period:
            sets.append(PeriodicIntervalSet.full(period))
            continue
        try:
            sets.append(PeriodicIntervalSet.from_pairs(period, pairs))
        except ValueError as exc:
            raise label.fail(str(exc)) from None
    try:
        return CKSequence(c, tuple(sets), gran)
    except ValueError as exc:
        raise rows[0][1][0].fail(str(exc)) from None


def ck_sequence_text(seq: CKSequence) -> str:
    return seq.to_text()


# ---------------------------------------------------------------------------
# graphs and matching instances


def parse_graph(text: str) -> TriangleFreeGraph:
    rows = list(_lines(text))
    if not rows:
        raise _eof(text)
    head = rows[0][1]
    if len(head) != 2:
        raise head[0].fail("expected header 'n m'")
    n, m = _int(head[0]), _int(head[1])
    if len(rows) - 1 != m:
        raise head[1].fail(f"header announces {m} edges, found {len(rows) - 1}")
    edges = []
    for _, toks in rows[1:]:
        if len(toks) != 2:
            raise toks[0].fail("expected an edge 'u v'")
        edges.append((_int(toks[0]), _int(toks[1])))
    try:
        return TriangleFreeGraph(n, tuple(edges))
    except ValueError as exc:
        raise head[0].fail(str(exc)) from None


def graph_text(g: TriangleFreeGraph) -> str:
    return "\n".join([f"{g.n} {len(g.edges)}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def parse_n3dm(text: str) -> N3DMInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from None
    if not isinstance(data, dict) or not {"x", "y", "z", "b"} <= set(data):
        raise ParseError(1, 1, 'expected an object with keys "x", "y", "z", "b"')
    try:
        return N3DMInstance(tuple(data["x"]), tuple(data["y"]), tuple(data["z"]), data["b"])
    except (TypeError, ValueError) as exc:
        raise ParseError(1, 1, str(exc)) from None


def n3dm_text(inst: N3DMInstance) -> str:
    return json.dumps({"x": list(inst.x), "y": list(inst.y), "z": list(inst.z), "b": inst.b})


def fence_svg(s: FenceSchedule, width: int = 640, height: int = 480) -> str:
    """Trajectories in the (x, t) plane over one period; for viewing only."""
    pad = 20
    span_x = float(s.length) or 1.0
    span_t = float(s.period)
    lo_x = min([0.0] + [float(min(x0, x1)) for a in s.agents
                        for _, x0, _, x1 in a.trajectory.segments()])
    hi_x = max([span_x] + [float(max(x0, x1)) for a in s.agents
                           for _, x0, _, x1 in a.trajectory.segments()])

    def px(x):
        return pad + (float(x) - lo_x) / (hi_x - lo_x or 1.0) * (width - 2 * pad)

    def py(t):
        return height - pad - float(t) / span_t * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect x="{px(0):.2f}" y="{pad}" width="{px(s.length) - px(0):.2f}" '
           f'height="{height - 2 * pad}" fill="#f4f4f4"/>']
    for a in s.agents:
        copies = int(s.period / a.trajectory.period)
        colour = "#c0392b" if a.speed == max(b.speed for b in s.agents) else "#2c3e50"
        for t0, x0, t1, x1 in a.trajectory.segments(copies):
            # fold into [0, P) for drawing
            shift = (t0 // s.period) * s.period
            t0, t1 = t0 - shift, t1 - shift
            out.append(f'<line x1="{px(x0):.2f}" y1="{py(t0):.2f}" x2="{px(x1):.2f}" '
                       f'y2="{py(t1):.2f}" stroke="{colour}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
