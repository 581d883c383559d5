"""Unidirectional circle patrolling and (c, k)-sequences.

A (c, k)-sequence is a family ``S_1 .. S_k`` of periodic unions of closed
intervals covering the line, where every interval of ``S_i`` is at most
``1 / (c i - 1)`` long and consecutive intervals of ``S_i`` are exactly 1
apart. Such a family turns into a schedule for agents of speeds ``1 .. 1/k``
on a circle of perimeter ``c / 2``, and any patrolling schedule on perimeter
``c`` yields one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rational import (
    PeriodicIntervalSet,
    Trajectory,
    divides,
    frac_mod,
    interval_set_covers_line,
    rational_lcm,
    trajectory_speed_ok,
)
from .sweep import SweepVerdict, check_idle


@dataclass(frozen=True)
class CKSequence:
    c: Fraction
    sets: tuple[PeriodicIntervalSet, ...]
    granularity: Fraction | None = None

    def __post_init__(self):
        if self.c <= 1:
            raise ValueError("c must exceed 1")
        if not self.sets:
            raise ValueError("a sequence needs at least one set")
        if len({s.period for s in self.sets}) != 1:
            raise ValueError("all sets must share one period")

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def period(self) -> Fraction:
        return self.sets[0].period

    def length_bound(self, i: int) -> Fraction:
        """Longest interval allowed in set ``i`` (1-indexed)."""
        return 1 / (self.c * i - 1)

    def to_text(self) -> str:
        head = f"c={self.c} k={self.k} period={self.period}"
        if self.granularity is not None:
            head += f" granularity={self.granularity}"
        lines = [head]
        for i, s in enumerate(self.sets, 1):
            body = " ".join(f"{lo},{hi}" for lo, hi in s.canonical_pairs())
            lines.append(f"{i}: {body}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CKSequence":
        from .rational import parse_rational

        rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = dict(tok.split("=", 1) for tok in rows[0].split())
        c = parse_rational(head["c"])
        k = int(head["k"])
        period = parse_rational(head["period"])
        gran = parse_rational(head["granularity"]) if "granularity" in head else None
        sets = []
        for row in rows[1:]:
            idx, _, body = row.partition(":")
            if int(idx) != len(sets) + 1:
                raise ValueError(f"set index {idx} out of order")
            pairs = []
            for tok in body.split():
                lo, hi = tok.split(",")
                pairs.append((parse_rational(lo), parse_rational(hi)))
            if len(pairs) == 1 and pairs[0][1] - pairs[0][0] == period:
                sets.append(PeriodicIntervalSet.full(period))
            else:
                sets.append(PeriodicIntervalSet.from_pairs(period, pairs))
        if len(sets) != k:
            raise ValueError(f"header says k={k} but {len(sets)} sets follow")
        return cls(c, tuple(sets), gran)


@dataclass(frozen=True)
class CKVerdict:
    ok: bool
    condition: str | None = None  # "length", "gap" or "cover"
    index: int | None = None
    detail: str = ""
    witness: Fraction | None = None

    def __bool__(self):
        return self.ok


def verify_ck(seq: CKSequence) -> CKVerdict:
    """Check the length bound, the exact unit gaps and the cover, exactly.

    A set equal to the whole line has no gaps; it passes the length test
    when the bound is at least the period.
    """
    for i, s in enumerate(seq.sets, 1):
        bound = seq.length_bound(i)
        if s.is_full:
            if bound < s.period:
                return CKVerdict(False, "length", i, f"full set but bound {bound} < period {s.period}")
            continue
        if not s.intervals:
            return CKVerdict(False, "gap", i, "empty set has no unit gaps")
        for lo, hi in s.intervals:
            if hi - lo > bound:
                return CKVerdict(False, "length", i, f"interval [{lo},{hi}] longer than {bound}", lo)
        n = len(s.intervals)
        for j in range(n):
            hi = s.intervals[j][1]
            nxt = s.intervals[(j + 1) % n][0] + (s.period if j == n - 1 else 0)
            if nxt - hi != 1:
                return CKVerdict(False, "gap", i, f"gap {nxt - hi} after {frac_mod(hi, s.period)}",
                                 frac_mod(hi, s.period))
    cov = interval_set_covers_line(seq.sets, seq.period)
    if not cov:
        return CKVerdict(False, "cover", None, "union misses a point", cov.witness)
    return CKVerdict(True)


# ---------------------------------------------------------------------------
# schedules on the circle


@dataclass(frozen=True)
class CircleAgent:
    speed: Fraction
    trajectory: Trajectory


@dataclass(frozen=True)
class CircleSchedule:
    """Clockwise agents on a circle; trajectories are unwrapped positions."""

    perimeter: Fraction
    idle: Fraction
    agents: tuple[CircleAgent, ...]
    period: Fraction

    def __post_init__(self):
        if self.perimeter <= 0 or self.idle <= 0:
            raise ValueError("perimeter and idle time must be positive")
        for a in self.agents:
            tr = a.trajectory
            laps = tr.drift / self.perimeter
            if laps.denominator != 1 or laps < 0:
                raise ValueError("drift per period must be a non-negative multiple of the perimeter")
            if not divides(tr.period, self.period):
                raise ValueError(f"trajectory period {tr.period} does not divide {self.period}")

    @classmethod
    def build(cls, perimeter, idle, agents: Sequence[tuple]) -> "CircleSchedule":
        agents = tuple(CircleAgent(Fraction(v), tr) for v, tr in agents)
        period = rational_lcm(a.trajectory.period for a in agents)
        return cls(Fraction(perimeter), Fraction(idle), agents, period)

    def is_monotone(self) -> bool:
        return all(a.trajectory.is_monotone() for a in self.agents)

    def speeds_ok(self) -> bool:
        return all(trajectory_speed_ok(a.trajectory, a.speed) for a in self.agents)


def runner(perimeter, speed, offset=0) -> Trajectory:
    """Constant clockwise motion, one lap per ``perimeter / speed``."""
    perimeter, speed = Fraction(perimeter), Fraction(speed)
    return Trajectory.make(perimeter / speed, [(0, Fraction(offset))], drift=perimeter)


def runners_strategy(speeds: Sequence) -> tuple[Fraction, CircleSchedule]:
    """The ``r`` fastest agents run equally spaced at speed ``v_r``; the rest stand still.

    ``r`` maximises ``r * v_r``, the smallest such ``r`` on ties.
    """
    speeds = [Fraction(v) for v in speeds]
    if not speeds or any(v <= 0 for v in speeds):
        raise ValueError("speeds must be positive")
    if any(a < b for a, b in zip(speeds, speeds[1:])):
        raise ValueError("speeds must be sorted in descending order")
    best_r = max(range(1, len(speeds) + 1), key=lambda r: (r * speeds[r - 1], -r))
    v = speeds[best_r - 1]
    perimeter = best_r * v
    agents = []
    for j, speed in enumerate(speeds):
        if j < best_r:
            agents.append((speed, runner(perimeter, v, j * perimeter / best_r)))
        else:
            agents.append((speed, Trajectory.stationary(0)))
    return perimeter, CircleSchedule.build(perimeter, 1, agents)


def circle_pieces(s: CircleSchedule):
    """Motion pieces cut at multiples of the perimeter and folded into ``[0, L]``.

    Visits to the point ``0 == L`` are recorded at both ends.
    """
    L = s.perimeter
    pieces = []

    def add(t0, x0, t1, x1):
        pieces.append((t0, x0, t1, x1))
        for end_x, t in ((x0, t0), (x1, t1)):
            if end_x == 0:
                pieces.append((t, L, t, L))
            elif end_x == L:
                pieces.append((t, Fraction(0), t, Fraction(0)))

    for a in s.agents:
        tr = a.trajectory
        for t0, x0, t1, x1 in tr.segments(int(s.period / tr.period)):
            if x1 < x0:
                raise ValueError("circle agents move clockwise only")
            if x0 == x1:
                add(t0, frac_mod(x0, L), t1, frac_mod(x0, L))
                continue
            speed = (x1 - x0) / (t1 - t0)
            lap = math.floor(x0 / L)
            a_x = x0
            while a_x < x1:
                b_x = min(x1, (lap + 1) * L)
                ta = t0 + (a_x - x0) / speed
                tb = t0 + (b_x - x0) / speed
                add(ta, a_x - lap * L, tb, b_x - lap * L)
                a_x = b_x
                lap += 1
    return pieces


def covered_times(traj: Trajectory, perimeter, window) -> PeriodicIntervalSet:
    """Times ``t`` at which the agent visits ``(L / window) t mod L`` during ``[t, t + window]``.

    Positions swept in the window form ``[X(t), X(t + window)]`` for a
    clockwise agent, so ``t`` is covered when that range holds a lap or
    reaches the next copy of the target. Both tests are linear between
    breakpoints. The result repeats with ``lcm(period, window)``.
    """
    L, w = Fraction(perimeter), Fraction(window)
    chase = L / w
    Q = rational_lcm([traj.period, w])
    reps = int(Q / traj.period)
    cuts = {Fraction(0), Q}
    for j in range(-1, reps + 1):
        for t, _ in traj.breakpoints:
            for u in (t + j * traj.period, t + j * traj.period - w):
                if 0 < u < Q:
                    cuts.add(u)
    cuts = sorted(cuts)
    pairs = []

    def nonneg(u, v, hu, hv):
        if hu >= 0 and hv >= 0:
            return (u, v)
        if hu < 0 and hv < 0:
            return None
        root = u + (v - u) * hu / (hu - hv)
        return (u, root) if hu >= 0 else (root, v)

    pos = traj.position
    for ta, tb in zip(cuts, cuts[1:]):
        xa, xb = pos(ta), pos(tb)
        da, db = pos(ta + w) - xa, pos(tb + w) - xb
        ga, gb = chase * ta - xa, chase * tb - xb
        # split where the target offset wraps past a lap
        n_lo, n_hi = sorted((math.floor(ga / L), math.floor(gb / L)))
        subs = [ta]
        for n in range(n_lo + 1, n_hi + 1):
            subs.append(ta + (tb - ta) * (n * L - ga) / (gb - ga))
        subs.append(tb)
        for u, v in zip(subs, subs[1:]):
            if v < u or (v == u and len(subs) > 2):
                continue

            def at(fa, fb, t):
                return fa + (fb - fa) * (t - ta) / (tb - ta) if tb != ta else fa

            gu, gv = at(ga, gb, u), at(ga, gb, v)
            n = math.floor(at(ga, gb, (u + v) / 2) / L)
            du, dv = at(da, db, u), at(da, db, v)
            for hit in (nonneg(u, v, du - L, dv - L), nonneg(u, v, du - (gu - n * L), dv - (gv - n * L))):
                if hit is not None:
                    pairs.append(hit)
    return PeriodicIntervalSet.from_pairs(Q, pairs)


def _certificate(s: CircleSchedule) -> bool:
    """Sufficient test: every time is covered with window ``T / 2``."""
    sets = [covered_times(a.trajectory, s.perimeter, s.idle / 2) for a in s.agents]
    common = rational_lcm(x.period for x in sets)
    return bool(interval_set_covers_line(sets, common))


def verify_circle_coverage(s: CircleSchedule, use_certificate: bool = True) -> SweepVerdict:
    """Exact decision whether every point of the circle is visited in every window of length ``T``.

    A cheap covering certificate is tried first; when it is inconclusive the
    exact sweep runs on the folded pieces.
    """
    if not s.is_monotone():
        raise ValueError("circle agents move clockwise only")
    if not s.speeds_ok():
        raise ValueError("some trajectory exceeds its agent's speed limit")
    if use_certificate and _certificate(s):
        return SweepVerdict(True, None, None, {"method": "certificate"})
    verdict = check_idle(circle_pieces(s), 0, s.perimeter, s.period, s.idle)
    verdict.stats["method"] = "sweep"
    return verdict


# ---------------------------------------------------------------------------
# sequences <-> schedules


class CircleCoverageError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def ck_to_circle_schedule(seq: CKSequence) -> CircleSchedule:
    """Schedule on perimeter ``c / 2`` for speeds ``1, 1/2, .., 1/k``.

    Time is halved: agent ``i`` covers the intervals of ``S_i / 2``, which
    are at most ``1 / (2 (c i - 1))`` long and ``1/2`` apart. At the start
    ``a`` of a covered interval it stands at ``c a``; it moves at full speed
    through the interval and then evenly through the gap so that it stands
    at the next start's image ``c a'`` (one lap less) in time.
    """
    verdict = verify_ck(seq)
    if not verdict:
        raise ValueError(f"not a valid sequence: {verdict.condition} {verdict.detail}")
    c = seq.c
    L = c / 2
    half = Fraction(1, 2)
    agents = []
    for i, s in enumerate(seq.sets, 1):
        v = Fraction(1, i)
        if s.is_full:
            agents.append((v, runner(L, v)))
            continue
        period = s.period / 2
        ivs = [(lo / 2, hi / 2) for lo, hi in s.intervals]
        y = c * ivs[0][0]
        pts = []
        for a, b in ivs:
            length = b - a
            pts.append((a, y))
            pts.append((b, y + v * length))
            y += c * length
        drift = c * sum((b - a for a, b in ivs), Fraction(0))
        # the last gap ends at the first start one period later
        assert ivs[-1][1] + half == ivs[0][0] + period
        agents.append((v, Trajectory.make(period, pts, drift=drift)))
    return CircleSchedule.build(L, 1, agents)


def circle_schedule_to_ck(s: CircleSchedule, c) -> CKSequence:
    """Per-agent covered sets of a patrolling schedule on a circle of perimeter ``c``."""
    c = Fraction(c)
    if s.perimeter != c:
        raise ValueError(f"perimeter {s.perimeter} differs from c={c}")
    if s.idle != 1:
        raise ValueError("idle time must be 1")
    verdict = verify_circle_coverage(s)
    if not verdict:
        raise CircleCoverageError("schedule does not patrol the circle", verdict.witness)
    return CKSequence(c, tuple(covered_sets(s)))


def covered_sets(s: CircleSchedule) -> list[PeriodicIntervalSet]:
    """Per agent, the times ``t`` at which it meets the point ``L t`` (mod ``L``) within ``[t, t + 1]``.

    ``L`` is the perimeter, so the chased point goes round once per time
    unit. All sets are repeated to one common period.
    """
    raw = [covered_times(a.trajectory, s.perimeter, Fraction(1)) for a in s.agents]
    common = rational_lcm(x.period for x in raw)
    return [x.repeat(common) for x in raw]


# ---------------------------------------------------------------------------
# greedy search on a grid

_NEG = -(1 << 30)


def _chain_values(reach: np.ndarray, starts: np.ndarray, n_cells: int, gap: int,
                  scale: int, left: np.ndarray, right: np.ndarray, full_bonus: int = 0) -> np.ndarray:
    """Backward chain DP for several start rows at once; returns the full value table.

    ``f[r, u]`` is the best score of an interval chain from start ``u``
    that lands exactly on ``starts[r] + n_cells``; an interval starting at
    ``u`` ends at some ``q <= reach[u]`` and the next one starts at
    ``q + gap``. An interval scores ``scale`` per cell plus ``left[u]`` and
    ``right[q]``.
    """
    rows = len(starts)
    width = len(reach)
    f = np.full((rows, width), _NEG, dtype=np.int32)
    ends = starts + n_cells
    f[np.arange(rows), ends] = 0
    top = n_cells
    while top > 0:
        lo = max(0, top - gap)
        us = np.arange(lo, top)
        r = reach[lo:top]
        q_hi = int(r.max())
        span = q_hi - lo + 1
        qs = np.arange(lo, lo + span, dtype=np.int32)
        h = f[:, lo + gap: lo + gap + span] + qs * scale + right[lo:lo + span]
        lens = r - us + 1
        levels = [h]
        k = 1
        while (1 << k) <= int(lens.max()):
            prev = levels[-1]
            step = 1 << (k - 1)
            levels.append(np.maximum(prev[:, :-step], prev[:, step:]))
            k += 1
        lvl = np.floor(np.log2(lens)).astype(np.int64)
        best = np.empty((rows, len(us)), dtype=np.int32)
        for j in np.unique(lvl):
            sel = np.nonzero(lvl == j)[0]
            a = us[sel] - lo
            b = r[sel] - (1 << int(j)) + 1 - lo
            tab = levels[int(j)]
            best[:, sel] = np.maximum(tab[:, a], tab[:, b])
        if full_bonus:
            # an interval grown to its full reach earns one extra point
            at_reach = f[:, r + gap] + r.astype(np.int32) * scale + right[r] + full_bonus
            best = np.maximum(best, at_reach)
        val = best - us.astype(np.int32) * scale + left[lo:top]
        val[best < _NEG // 2] = _NEG
        f[:, lo:top] = val
        top = lo
    return f


def _best_chain(free: np.ndarray, gap: int, lmax: int, hug: bool = True, reach_bonus: bool = True):
    """Interval chain on the cyclic grid covering the most free cells.

    Returns ``(covered, [(start_cell, length_cells), ...])``. With some cell
    taken, the gap over the first taken cell ``c`` puts exactly one start in
    ``[c + 1, c + gap]``, so only those starts need a row.

    Among chains covering the most cells, ``hug`` prefers interval ends that
    touch taken cells (fewer free fragments) and ``reach_bonus`` prefers
    intervals grown as far as allowed; remaining ties go to the earliest
    start and then the longest interval.
    """
    n = len(free)
    occupied = np.nonzero(~free)[0]
    if len(occupied) == 0:
        origin, n_rows = 0, 1
    else:
        origin, n_rows = int(occupied[0]) + 1, gap
    width = n + 2 * gap + lmax + 2
    cells = (np.arange(width) + origin) % n
    taken = ~free[cells]
    occ_u = np.append(np.nonzero(taken)[0], width + lmax)  # sentinel
    next_occ = occ_u[np.searchsorted(occ_u, np.arange(width))]
    reach = np.minimum(np.arange(width) + lmax, next_occ)
    scale = 4 * (n // gap + 1)
    right = left = np.zeros(width, dtype=np.int32)
    full_bonus = int(reach_bonus)
    if hug:
        right = taken.astype(np.int32)
        left = np.roll(taken, 1).astype(np.int32)
        left[0] = len(occupied) > 0
    if (n + 2 * gap + lmax) * scale >= 1 << 29:
        raise ValueError("grid too large for the chain search")

    batch = max(1, min(n_rows, (1 << 24) // width))
    best_val, best_row = -1, None
    for r0 in range(0, n_rows, batch):
        starts = np.arange(r0, min(n_rows, r0 + batch))
        f = _chain_values(reach, starts, n, gap, scale, left, right, full_bonus)
        diag = f[np.arange(len(starts)), starts]
        j = int(np.argmax(diag))
        if diag[j] > best_val:
            best_val, best_row = int(diag[j]), int(starts[j])
    cells_won = best_val // scale if best_val >= 0 else 0
    if cells_won <= 0:
        return 0, []
    f = _chain_values(reach, np.array([best_row]), n, gap, scale, left, right, full_bonus)[0]
    chain = []
    u, end = best_row, best_row + n
    while u != end:
        qs = np.arange(u, reach[u] + 1)
        vals = qs * scale + right[qs] + f[qs + gap] + full_bonus * (qs == reach[u])
        q = int(qs[np.nonzero(vals == vals.max())[0][-1]])
        chain.append(((u + origin) % n, q - u))
        u = q + gap
    assert sum(length for _, length in chain) == cells_won
    return cells_won, chain


@dataclass
class GreedyResult:
    sequence: CKSequence | None
    sets: list[PeriodicIntervalSet]
    covered_cells: int
    total_cells: int
    cells_per_set: list[int] = field(default_factory=list)
    stop: str = "covered"  # or "stalled" (no set gains a cell) or "k_max"

    @property
    def found(self) -> bool:
        return self.sequence is not None


def greedy_ck_search(c, granularity, period, k_max: int, progress=None,
                     hug: bool = True, reach_bonus: bool = True) -> GreedyResult:
    """Build ``S_1, S_2, ..`` one at a time, each covering the most still-free grid cells.

    Interval ends lie on multiples of ``granularity`` and every set repeats
    with ``period``. Stops as soon as the union is the whole line or after
    ``k_max`` sets; ``sequence`` is ``None`` in the latter case.
    """
    c, g, period = Fraction(c), Fraction(granularity), Fraction(period)
    if c <= 1:
        raise ValueError("c must exceed 1")
    if g <= 0 or not divides(g, period) or not divides(g, Fraction(1)):
        raise ValueError("granularity must divide both the period and 1")
    if period < 1:
        raise ValueError("period must be at least 1")
    n = int(period / g)
    gap = int(1 / g)
    free = np.ones(n, dtype=bool)
    sets: list[PeriodicIntervalSet] = []
    counts: list[int] = []
    for i in range(1, k_max + 1):
        bound = 1 / (c * i - 1)
        if bound >= period:
            # a whole circle is allowed: take everything that is left
            got = int(free.sum())
            free[:] = False
            sets.append(PeriodicIntervalSet.full(period))
            counts.append(got)
        else:
            lmax = min(n, math.floor(bound / g))
            got, chain = _best_chain(free, gap, lmax, hug, reach_bonus)
            if got == 0:
                return GreedyResult(None, sets, int((~free).sum()), n, counts, "stalled")
            pairs = []
            for start, length in chain:
                idx = (np.arange(start, start + length)) % n
                free[idx] = False
                pairs.append((start * g, (start + length) * g))
            sets.append(PeriodicIntervalSet.from_pairs(period, pairs))
            counts.append(got)
        if progress is not None:
            progress(i, got, int((~free).sum()), n)
        if not free.any():
            seq = CKSequence(c, tuple(sets), g)
            return GreedyResult(seq, sets, n, n, counts)
    return GreedyResult(None, sets, int((~free).sum()), n, counts, "k_max")
