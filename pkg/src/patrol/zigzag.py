"""Zigzag discretisation of fence schedules and a small exhaustive search.

A ``(v, xi)``-zigzag movement on a time window starts on the grid ``xi Z``,
makes at most three full-speed legs between grid points and then rests.
Any speed-``v`` motion on a window can be replaced by one on a slightly
stretched window that starts and ends on the floor grid images and sweeps at
least the same positions; such schedules are periodic up to a bounded
transient, which makes the fence problem searchable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .fence import FenceSchedule, verify_fence_coverage
from .rational import Trajectory


@dataclass(frozen=True)
class ZigzagMovement:
    p: tuple[int, int, int, int]
    xi: Fraction
    t_start: Fraction
    t_end: Fraction
    speed: Fraction

    @property
    def path_length(self) -> Fraction:
        p0, p1, p2, p3 = self.p
        return (abs(p0 - p1) + abs(p1 - p2) + abs(p2 - p3)) * self.xi

    def within_bound(self) -> bool:
        return self.path_length <= (self.t_end - self.t_start) * self.speed

    def breakpoints(self) -> list[tuple[Fraction, Fraction]]:
        """Times and positions of the legs, ending with the rest at ``p3``."""
        t = self.t_start
        pts = [(t, self.p[0] * self.xi)]
        for a, b in zip(self.p, self.p[1:]):
            if a != b:
                t = t + abs(a - b) * self.xi / self.speed
                pts.append((t, b * self.xi))
        if pts[-1][0] < self.t_end:
            pts.append((self.t_end, self.p[3] * self.xi))
        return pts

    def position(self, t) -> Fraction:
        t = Fraction(t)
        pts = self.breakpoints()
        for (t0, x0), (t1, x1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                return x0 + (x1 - x0) * (t - t0) / (t1 - t0)
        raise ValueError(f"time {t} outside the movement window")

    def positions_span(self) -> tuple[Fraction, Fraction]:
        return min(self.p) * self.xi, max(self.p) * self.xi


def zigzag_convert(points: Sequence[tuple], speed, xi, delta) -> ZigzagMovement:
    """Zigzag replacement of a piecewise-linear motion on one window.

    ``points`` are the ``(time, position)`` breakpoints of the motion on
    ``[t_start, t_end]``; the result lives on the window stretched by
    ``1 + delta``.
    """
    pts = [(Fraction(t), Fraction(x)) for t, x in points]
    speed, xi, delta = Fraction(speed), Fraction(xi), Fraction(delta)
    if len(pts) < 1:
        raise ValueError("need at least one breakpoint")
    t_start, t_end = pts[0][0], pts[-1][0]
    tau = t_end - t_start
    if tau <= 0:
        raise ValueError("window must have positive length")
    if xi <= 0 or xi > tau * speed * delta / 5:
        raise ValueError("grid too coarse: need xi <= tau * v * delta / 5")
    for (t0, x0), (t1, x1) in zip(pts, pts[1:]):
        if t1 <= t0:
            raise ValueError("breakpoint times must increase")
        if abs(x1 - x0) > speed * (t1 - t0):
            raise ValueError("input motion exceeds the speed limit")
    lo_t, lo_x = min(pts, key=lambda p: (p[1], p[0]))
    hi_t, hi_x = max(pts, key=lambda p: (p[1], -p[0]))
    p0 = math.floor(pts[0][1] / xi)
    p3 = math.floor(pts[-1][1] / xi)
    if lo_t <= hi_t:
        p1, p2 = math.floor(lo_x / xi), math.ceil(hi_x / xi)
    else:
        p1, p2 = math.ceil(hi_x / xi), math.floor(lo_x / xi)
    return ZigzagMovement((p0, p1, p2, p3), xi, (1 + delta) * t_start,
                          (1 + delta) * t_end, speed)


@dataclass(frozen=True)
class ZigzagParams:
    delta: Fraction
    tau: Fraction       # window of the original schedule
    block: Fraction     # stretched window, the zigzag block length
    xi: Fraction
    steps: tuple[int, ...]  # full-speed grid steps per block, per agent


def zigzag_params(speeds: Sequence, eps, idle=1) -> ZigzagParams:
    """Grid and block sizes that keep the idle time within a factor ``1 + eps``."""
    speeds = [Fraction(v) for v in speeds]
    eps, idle = Fraction(eps), Fraction(idle)
    delta = eps / 2
    tau = idle * eps / (4 * (1 + delta))
    xi = tau * min(speeds) * delta / 5
    block = (1 + delta) * tau
    steps = tuple(math.floor(v * block / xi) for v in speeds)
    return ZigzagParams(delta, tau, block, xi, steps)


# ---------------------------------------------------------------------------
# grid schedules made of zigzag blocks


def blocks_to_trajectory(blocks: Sequence[tuple[int, int, int, int]], xi, block, speed) -> Trajectory:
    """Periodic trajectory repeating the given zigzag quadruples, one per block."""
    xi, block, speed = Fraction(xi), Fraction(block), Fraction(speed)
    for prev, cur in zip(blocks, list(blocks[1:]) + [blocks[0]]):
        if prev[3] != cur[0]:
            raise ValueError("consecutive blocks must join on the grid")
    pts = []
    for m, p in enumerate(blocks):
        mv = ZigzagMovement(tuple(p), xi, m * block, (m + 1) * block, speed)
        if not mv.within_bound():
            raise ValueError(f"block {m} is too long for speed {speed}")
        bp = mv.breakpoints()
        pts.extend(bp[:-1] if bp[-1][0] == (m + 1) * block else bp)
    return Trajectory.make(len(blocks) * block, pts)


def periodize(blocks: Sequence[tuple], window: int) -> tuple[int, int]:
    """Find ``m0 < m1`` whose length-``window`` block runs coincide.

    ``blocks[m]`` describes all agents during block ``m`` (hashable). Repeating
    ``blocks[m0:m1]`` forever gives a periodic schedule whose every
    ``window``-block stretch already occurred in the input.
    """
    seen: dict[tuple, int] = {}
    for m in range(len(blocks) - window + 1):
        key = tuple(blocks[m:m + window])
        if key in seen:
            return seen[key], m
        seen[key] = m
    raise ValueError("no repeated window; input too short")


def schedule_from_blocks(blocks: Sequence[tuple], speeds, xi, block, length, idle=1) -> FenceSchedule:
    """Fence schedule from per-block tuples of per-agent quadruples."""
    k = len(speeds)
    trajs = []
    for i in range(k):
        seq = [b[i] for b in blocks]
        trajs.append((speeds[i], blocks_to_trajectory(seq, xi, block, speeds[i])))
    return FenceSchedule.build(length, idle, trajs)


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchResult:
    length: Fraction
    schedule: FenceSchedule | None
    complete: bool
    explored: int
    params: ZigzagParams
    probes: list = field(default_factory=list)


def _walks(q: int, top: int, step: int, anchored: bool) -> Iterator[tuple[int, ...]]:
    """Closed walks of ``q`` block positions in ``[0, top]``.

    Each block either rests, moves one full-speed step, or moves straight
    onto a fence end within reach. ``anchored`` walks start at their minimum.
    """
    def moves(pos):
        opts = {pos}
        for d in (-step, step):
            if 0 <= pos + d <= top:
                opts.add(pos + d)
        if pos - step < 0 <= pos:
            opts.add(0)
        if pos + step > top >= pos:
            opts.add(top)
        return sorted(opts)

    starts = [0] if anchored else range(top + 1)
    for s in starts:
        path = [s]

        def rec():
            if len(path) == q:
                if path[0] in moves(path[-1]):
                    if not anchored or min(path) == path[0]:
                        yield tuple(path)
                return
            for nxt in moves(path[-1]):
                if anchored and nxt < path[0]:
                    continue
                path.append(nxt)
                yield from rec()
                path.pop()

        yield from rec()


def _walk_blocks(walk):
    n = len(walk)
    return [(walk[m], walk[m], walk[(m + 1) % n], walk[(m + 1) % n]) for m in range(n)]


def zigzag_search(speeds: Sequence, eps, idle=1, max_blocks: int | None = None,
                  budget: int = 200_000) -> SearchResult:
    """Longest fence patrolled by an enumerated periodic zigzag schedule.

    Candidate lengths are grid multiples ``B * xi`` tried by bisection.
    Within a probe, schedules of every block count up to ``max_blocks`` are
    enumerated: each agent runs a closed walk whose blocks rest or move at
    full speed, agent 0 anchored at its lowest point (time translation).
    ``budget`` caps the number of schedules handed to the exact verifier;
    when it runs out the best verified schedule so far is returned with
    ``complete=False``.
    """
    speeds = [Fraction(v) for v in speeds]
    idle = Fraction(idle)
    params = zigzag_params(speeds, eps, idle)
    if max_blocks is None:
        max_blocks = math.ceil(idle / params.block)
    top_bound = math.floor(sum(speeds) * idle / params.xi)
    explored = 0
    complete = True
    best: tuple[int, FenceSchedule | None] = (-1, None)
    probes = []

    def feasible(top: int):
        nonlocal explored, complete
        length = top * params.xi
        if top == 0:
            traj = Trajectory.stationary(0)
            return FenceSchedule.build(0, idle, [(v, traj) for v in speeds])
        for q in range(1, max_blocks + 1):
            per_agent = []
            for i, step in enumerate(speeds):
                walks = list(_walks(q, top, params.steps[i], anchored=(i == 0)))
                per_agent.append(walks)
            for combo in itertools.product(*per_agent):
                lo = min(min(w) for w in combo)
                spans = sorted((min(w), max(w)) for w in combo)
                if lo > 0 or not _spans_cover(spans, top):
                    continue
                if explored >= budget:
                    complete = False
                    return None
                explored += 1
                blocks = list(zip(*(_walk_blocks(w) for w in combo)))
                sched = schedule_from_blocks(blocks, speeds, params.xi, params.block, length, idle)
                if verify_fence_coverage(sched).ok:
                    return sched
        return None

    lo, hi = 0, top_bound
    best = (0, feasible(0))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        sched = feasible(mid)
        probes.append((mid, sched is not None))
        if sched is not None:
            lo = mid
            best = (mid, sched)
        else:
            hi = mid - 1
        if not complete:
            break
    return SearchResult(best[0] * params.xi, best[1], complete, explored, params, probes)


def _spans_cover(spans, top) -> bool:
    reach = 0
    for a, b in spans:
        if a > reach:
            return False
        reach = max(reach, b)
    return reach >= top
