"""Exact idle-time check over a one-dimensional domain.

A point ``x`` is patrolled with idle time ``T`` when, cyclically over the
time period ``P``, the visits to ``x`` never leave an open gap longer than
``T`` (a gap of exactly ``T`` is fine: windows are half-open and visits are
closed points).

The domain is cut at every position where some motion piece starts, ends or
rests. Inside one slab every piece crossing it contributes a visit time that
is linear in ``x``; the cyclic order of those times only changes where two
adjacent lines meet, and between such events every gap is linear. So the
largest gap is attained at slab ends or at crossing events, which the
kinetic sweep below visits in order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Piece = tuple[Fraction, Fraction, Fraction, Fraction]  # t0, x0, t1, x1


@dataclass
class SweepVerdict:
    ok: bool
    witness: tuple[Fraction, Fraction] | None = None
    max_gap: Fraction | None = None
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _mod(x: Fraction, p: Fraction) -> Fraction:
    return x - p * math.floor(x / p)


def max_cyclic_gap(intervals: Iterable[tuple[Fraction, Fraction]], period: Fraction):
    """Largest open gap between closed time intervals on a circle of length ``period``.

    Returns ``(gap, gap_start)``. Full coverage gives gap 0; no visits at all
    gives ``2 * period`` so that it fails any idle time below a period.
    """
    norm = []
    for a, b in intervals:
        if b - a >= period:
            return Fraction(0), Fraction(0)
        a2 = _mod(a, period)
        norm.append((a2, a2 + (b - a)))
    if not norm:
        return 2 * period, Fraction(0)
    norm.sort()
    merged = []
    for a, b in norm:
        if merged and a <= merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1][1] = b
        else:
            merged.append([a, b])
    best, best_start = Fraction(-1), Fraction(0)
    n = len(merged)
    for j in range(n):
        end = merged[j][1]
        nxt = merged[j + 1][0] if j + 1 < n else merged[0][0] + period
        gap = nxt - end
        if gap > best:
            best, best_start = gap, end
    return max(best, Fraction(0)), best_start


class _Line:
    __slots__ = ("alpha", "beta")

    def __init__(self, alpha: Fraction, beta: Fraction):
        self.alpha = alpha
        self.beta = beta

    def at(self, x: Fraction) -> Fraction:
        return self.alpha + self.beta * x


def _line_of(piece: Piece) -> _Line:
    t0, x0, t1, x1 = piece
    beta = (t1 - t0) / (x1 - x0)
    return _Line(t0 - beta * x0, beta)


def check_idle(pieces: Sequence[Piece], x_lo, x_hi, period, idle) -> SweepVerdict:
    """Verify that every ``x`` in ``[x_lo, x_hi]`` has all visit gaps ``<= idle``.

    ``pieces`` are linear motion pieces ``(t0, x0, t1, x1)`` with ``t0 < t1``
    whose union over one time period describes all visits; times are taken
    modulo ``period``.
    """
    pieces = list(pieces)
    x_lo, x_hi = Fraction(x_lo), Fraction(x_hi)
    period, idle = Fraction(period), Fraction(idle)

    moving: list[tuple[Fraction, Fraction, _Line]] = []
    resting: list[Piece] = []
    crit = {x_lo, x_hi}
    for p in pieces:
        t0, x0, t1, x1 = p
        lo, hi = (x0, x1) if x0 <= x1 else (x1, x0)
        if hi < x_lo or lo > x_hi:
            continue
        if x0 == x1:
            resting.append(p)
            crit.add(x0)
        else:
            moving.append((lo, hi, _line_of(p)))
            if x_lo < lo < x_hi:
                crit.add(lo)
            if x_lo < hi < x_hi:
                crit.add(hi)
    xs = sorted(x for x in crit if x_lo <= x <= x_hi)
    stats = {"critical_x": len(xs), "events": 0, "pieces": len(pieces)}

    # moving pieces sorted by left end for slab membership
    moving.sort(key=lambda m: m[0])
    resting_at: dict[Fraction, list[tuple[Fraction, Fraction]]] = {}
    for t0, x0, t1, _ in resting:
        resting_at.setdefault(x0, []).append((t0, t1))

    worst = Fraction(0)

    def visits_exact(x: Fraction, lines: Iterable[_Line]):
        ivs = [(ln.at(x), ln.at(x)) for ln in lines]
        ivs.extend(resting_at.get(x, ()))
        return ivs

    # lines active on a closed x: pieces with lo <= x <= hi
    active: list[tuple[Fraction, Fraction, _Line]] = []
    mi = 0
    for idx, x in enumerate(xs):
        while mi < len(moving) and moving[mi][0] <= x:
            active.append(moving[mi])
            mi += 1
        active = [m for m in active if m[1] >= x]
        gap, start = max_cyclic_gap(visits_exact(x, (m[2] for m in active)), period)
        worst = max(worst, gap)
        if gap > idle:
            return SweepVerdict(False, (x, _witness_time(gap, start, idle, period)), gap, stats)
        if idx + 1 == len(xs):
            break
        xb = xs[idx + 1]
        slab_lines = [m[2] for m in active if m[1] >= xb]
        verdict = _kinetic_slab(slab_lines, x, xb, period, idle, stats)
        if verdict is not None:
            verdict.stats = stats
            return verdict
        worst = max(worst, stats.pop("_slab_worst", Fraction(0)))
    return SweepVerdict(True, None, worst, stats)


def _witness_time(gap, start, idle, period):
    if gap >= 2 * period:
        return Fraction(0)
    return _mod(start + (gap - idle) / 2, period)


def _probe(lines: list[_Line], x: Fraction, period, idle):
    gap, start = max_cyclic_gap([(ln.at(x), ln.at(x)) for ln in lines], period)
    if gap > idle:
        return (x, _witness_time(gap, start, idle, period)), gap
    return None, gap


def _interior_witness(lines, xa, xb, near_left: bool, period, idle):
    width = xb - xa
    for k in range(1, 200):
        h = width / (2 ** k)
        x = xa + h if near_left else xb - h
        w, gap = _probe(lines, x, period, idle)
        if w is not None:
            return w, gap
    raise AssertionError("limit gap exceeded idle but no interior witness found")


def _kinetic_slab(lines: list[_Line], xa: Fraction, xb: Fraction, period, idle, stats):
    """Check the open slab ``(xa, xb)``; return a failing verdict or ``None``."""
    if not lines:
        x = (xa + xb) / 2
        return SweepVerdict(False, (x, Fraction(0)), None)
    keyed = {}
    for ln in lines:
        v = _mod(ln.at(xa), period)
        keyed.setdefault((v, ln.beta), ln)
    order = sorted(keyed)  # order just to the right of xa
    m = len(order)
    lns = [keyed[k] for k in order]
    vals = [k[0] for k in order]
    betas = [k[1] for k in order]

    if m == 1:
        if period > idle:
            w, gap = _interior_witness(lns, xa, xb, True, period, idle)
            return SweepVerdict(False, w, gap)
        stats["_slab_worst"] = period
        return None

    nxt = [(i + 1) % m for i in range(m)]
    prv = [(i - 1) % m for i in range(m)]
    # gap of pair (i, nxt[i]) is ref_g[i] + (beta[nxt]-beta[i]) * (x - ref_x[i])
    ref_x = [xa] * m
    ref_g = [(vals[(i + 1) % m] - vals[i]) if i + 1 < m else (vals[0] + period - vals[i])
             for i in range(m)]
    ver = [0] * m
    worst = Fraction(0)

    def gap_at(i, x):
        return ref_g[i] + (betas[nxt[i]] - betas[i]) * (x - ref_x[i])

    heap: list = []
    counter = 0

    def schedule(i):
        nonlocal counter
        j = nxt[i]
        rate = betas[j] - betas[i]
        if rate >= 0:
            return
        xe = ref_x[i] + ref_g[i] / (-rate)
        if xe < xb:
            counter += 1
            heapq.heappush(heap, (xe, counter, i, ver[i]))

    for i in range(m):
        g = ref_g[i]
        if g > worst:
            worst = g
        if g > idle:
            w, gap = _interior_witness(lns, xa, xb, True, period, idle)
            return SweepVerdict(False, w, gap)
        schedule(i)

    while heap:
        xe, _, i, v = heapq.heappop(heap)
        if ver[i] != v:
            continue
        stats["events"] += 1
        j = nxt[i]
        if m == 2:
            # two points on a circle: the small gap flips sides
            ref_x[i], ref_g[i] = xe, period
            ref_x[j], ref_g[j] = xe, Fraction(0)
            ver[i] += 1
            ver[j] += 1
            schedule(i)
            schedule(j)
            continue
        p, n = prv[i], nxt[j]
        g_pi = gap_at(p, xe)
        g_jn = gap_at(j, xe)
        # p -> i -> j -> n  becomes  p -> j -> i -> n
        nxt[p], prv[j] = j, p
        nxt[j], prv[i] = i, j
        nxt[i], prv[n] = n, i
        ref_x[p], ref_g[p] = xe, g_pi
        ref_x[j], ref_g[j] = xe, Fraction(0)
        ref_x[i], ref_g[i] = xe, g_jn
        for q in (p, j, i):
            ver[q] += 1
        for g in (g_pi, g_jn):
            if g > worst:
                worst = g
            if g > idle:
                w, gap = _probe(lns, xe, period, idle)
                if w is None:  # pragma: no cover - sorted values agree with the pair gap
                    raise AssertionError("event gap disagreement")
                return SweepVerdict(False, w, gap)
        for q in (p, j, i):
            schedule(q)

    for i in range(m):
        g = gap_at(i, xb)
        if g > worst:
            worst = g
        if g > idle:
            w, gap = _interior_witness(lns, xa, xb, False, period, idle)
            return SweepVerdict(False, w, gap)
    stats["_slab_worst"] = worst
    return None
