"""Point patrolling: the discretised feasibility solver and its companions.

Agents with minimum revisit intervals ``a_i`` (integers) must cover every
integer tick. A tuple is *good* when some schedule does this forever and
*bad* otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby
from typing import Iterator, Sequence

DEFAULT_MAX_STATES = 10 ** 8


class BudgetExceeded(RuntimeError):
    """The state budget ran out before the search could decide."""


@dataclass(frozen=True)
class PointInstance:
    intervals: tuple[int, ...]

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("instance must have at least one agent")
        if any(int(a) != a or a < 1 for a in self.intervals):
            raise ValueError("intervals must be positive integers")

    @classmethod
    def of(cls, *intervals) -> "PointInstance":
        if len(intervals) == 1 and not isinstance(intervals[0], int):
            intervals = tuple(intervals[0])
        return cls(tuple(int(a) for a in intervals))

    @property
    def k(self) -> int:
        return len(self.intervals)

    def canonical(self) -> "PointInstance":
        return PointInstance(tuple(sorted(self.intervals)))

    def reciprocal_sum(self) -> Fraction:
        return sum((Fraction(1, a) for a in self.intervals), Fraction(0))

    def product(self) -> int:
        return math.prod(self.intervals)


@dataclass(frozen=True)
class PeriodicVisitSchedule:
    """``assignment[t]`` is the agent visiting at tick ``t``, repeated with the period."""

    assignment: tuple[int, ...]

    @property
    def period(self) -> int:
        return len(self.assignment)

    def gaps(self) -> dict[int, list[int]]:
        """Cyclic gaps between consecutive visits of each agent."""
        by_agent: dict[int, list[int]] = {}
        for t, a in enumerate(self.assignment):
            by_agent.setdefault(a, []).append(t)
        out = {}
        for a, ts in by_agent.items():
            out[a] = [(ts[(j + 1) % len(ts)] - ts[j]) % self.period or self.period
                      for j in range(len(ts))]
        return out

    def violations(self, intervals: Sequence[int]) -> list[str]:
        problems = []
        if not self.assignment:
            problems.append("empty schedule")
        for a in self.assignment:
            if not 0 <= a < len(intervals):
                problems.append(f"unknown agent {a}")
        if problems:
            return problems
        for a, gs in self.gaps().items():
            if min(gs) < intervals[a]:
                problems.append(f"agent {a} revisits after {min(gs)} < {intervals[a]}")
        return problems

    def is_valid_for(self, intervals: Sequence[int]) -> bool:
        return not self.violations(intervals)

    def to_text(self) -> str:
        return f"period={self.period}: " + " ".join(map(str, self.assignment))

    @classmethod
    def from_text(cls, text: str) -> "PeriodicVisitSchedule":
        head, _, body = text.partition(":")
        key, _, val = head.partition("=")
        if key.strip() != "period":
            raise ValueError(f"expected 'period=C:' in {text!r}")
        assignment = tuple(int(tok) for tok in body.split())
        if len(assignment) != int(val):
            raise ValueError(f"period {val} but {len(assignment)} entries")
        return cls(assignment)


@dataclass
class SolveResult:
    status: str  # "good", "bad" or "unknown-budget"
    schedule: PeriodicVisitSchedule | None = None
    states: int = 0
    cycle: list = field(default_factory=list)

    @property
    def good(self) -> bool:
        return self.status == "good"


# ---------------------------------------------------------------------------
# the canonical cooldown graph


class _Groups:
    """Agents grouped by equal interval; the state holds sorted cooldowns per group."""

    def __init__(self, intervals: Sequence[int]):
        order = sorted(range(len(intervals)), key=lambda i: (intervals[i], i))
        self.order = order
        self.sizes: list[int] = []
        self.values: list[int] = []
        for a, grp in groupby(order, key=lambda i: intervals[i]):
            self.values.append(a)
            self.sizes.append(len(list(grp)))
        self.offsets = [0]
        for s in self.sizes:
            self.offsets.append(self.offsets[-1] + s)
        # try the rarest agents first: they are hardest to fit later
        self.choice_order = sorted(range(len(self.values)), key=lambda g: -self.values[g])

    def start(self) -> tuple[int, ...]:
        return tuple(v - 1 for v, s in zip(self.values, self.sizes) for _ in range(s))

    def successors(self, state: tuple[int, ...]) -> Iterator[tuple[int, tuple[int, ...]]]:
        caps = self.values
        for g in self.choice_order:
            hi = self.offsets[g + 1]
            if state[hi - 1] != caps[g] - 1:
                continue
            yield g, self._advance(state, g)

    def _advance(self, state, chosen: int) -> tuple[int, ...]:
        out = []
        for g, cap in enumerate(self.values):
            lo, hi = self.offsets[g], self.offsets[g + 1]
            seg = [min(b + 1, cap - 1) for b in state[lo:hi]]
            if g == chosen:
                seg.pop()  # the visiting agent held the largest cooldown
                seg.insert(0, 0)
            out.extend(seg)
        return tuple(out)


def solve_discretized(inst: PointInstance | Sequence[int], max_states: int = DEFAULT_MAX_STATES,
                      prune_dominated: bool = False) -> SolveResult:
    """Decide whether the integer intervals admit a schedule visiting every tick.

    Depth-first search over canonical cooldown states from the all-ready state;
    the instance is good iff a cycle is reachable. Agents sharing an interval
    are interchangeable, so their cooldowns are stored sorted. With
    ``prune_dominated`` a state is skipped when a fully explored dead state
    has componentwise larger cooldowns.
    """
    if not isinstance(inst, PointInstance):
        inst = PointInstance.of(inst)
    groups = _Groups(inst.intervals)
    start = groups.start()

    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[tuple, int] = {start: GREY}
    dead: list[tuple] = []
    stack = [(start, groups.successors(start))]
    path_moves: list[int] = []
    while stack:
        state, it = stack[-1]
        advanced = False
        for g, nxt in it:
            c = color.get(nxt, WHITE)
            if c == GREY:
                path_states = [s for s, _ in stack]
                idx = path_states.index(nxt)
                word = path_moves[idx:] + [g]
                cycle_states = path_states[idx:]
                sched = _unfold_cycle(groups, inst.intervals, cycle_states[0], word)
                return SolveResult("good", sched, len(color), word)
            if c == BLACK:
                continue
            if prune_dominated and any(_dominates(d, nxt) for d in dead):
                color[nxt] = BLACK
                continue
            if len(color) >= max_states:
                return SolveResult("unknown-budget", None, len(color))
            color[nxt] = GREY
            stack.append((nxt, groups.successors(nxt)))
            path_moves.append(g)
            advanced = True
            break
        if not advanced:
            color[state] = BLACK
            if prune_dominated:
                dead.append(state)
            stack.pop()
            if path_moves:
                path_moves.pop()
    return SolveResult("bad", None, len(color))


def _dominates(big: tuple, small: tuple) -> bool:
    return all(b >= s for b, s in zip(big, small))


def _unfold_cycle(groups: _Groups, intervals, canon_start, word) -> PeriodicVisitSchedule:
    """Concrete agent schedule from a cycle of group choices.

    Agents of a group are interchangeable in the canonical graph; here each
    group's cooldowns are handed to real agents and the cycle word repeated
    until the concrete state comes back, choosing the lowest-indexed ready
    agent of the group each time.
    """
    cd: dict[int, int] = {}
    for g in range(len(groups.values)):
        lo, hi = groups.offsets[g], groups.offsets[g + 1]
        for agent, b in zip(groups.order[lo:hi], canon_start[lo:hi]):
            cd[agent] = b
    members = [groups.order[groups.offsets[g]:groups.offsets[g + 1]] for g in range(len(groups.values))]
    seen: dict[tuple, int] = {}
    ticks: list[int] = []
    while True:
        key = tuple(sorted(cd.items()))
        if key in seen:
            return PeriodicVisitSchedule(tuple(ticks[seen[key]:]))
        seen[key] = len(ticks)
        for g in word:
            cap = groups.values[g] - 1
            agent = min(a for a in members[g] if cd[a] == cap)
            ticks.append(agent)
            for a in cd:
                cd[a] = 0 if a == agent else min(cd[a] + 1, intervals[a] - 1)


def brute_force_good(intervals: Sequence[int]) -> bool:
    """Reference decision on the full (uncanonicalised) cooldown graph.

    Builds every state reachable from the all-ready state and asks whether the
    reachable graph has a cycle, via iterative removal of sink states.
    """
    a = list(intervals)
    start = tuple(x - 1 for x in a)
    succ: dict[tuple, list[tuple]] = {}
    todo = [start]
    while todo:
        s = todo.pop()
        if s in succ:
            continue
        outs = []
        for r in range(len(a)):
            if s[r] == a[r] - 1:
                outs.append(tuple(0 if i == r else min(s[i] + 1, a[i] - 1) for i in range(len(a))))
        succ[s] = outs
        todo.extend(outs)
    # peel states with no remaining successors; a cycle survives
    outdeg = {s: len(v) for s, v in succ.items()}
    preds: dict[tuple, list[tuple]] = {s: [] for s in succ}
    for s, outs in succ.items():
        for t in outs:
            preds[t].append(s)
    queue = [s for s, d in outdeg.items() if d == 0]
    removed = 0
    while queue:
        s = queue.pop()
        removed += 1
        for p in preds[s]:
            outdeg[p] -= 1
            if outdeg[p] == 0:
                queue.append(p)
    return removed < len(succ)


def necessary_condition(inst: PointInstance | Sequence[int]) -> bool:
    """False means certainly bad: the reciprocal sum is below one."""
    if not isinstance(inst, PointInstance):
        inst = PointInstance.of(inst)
    return inst.reciprocal_sum() >= 1


# ---------------------------------------------------------------------------
# constructive schedules


def power_of_two_schedule(exponents: Sequence[int]) -> PeriodicVisitSchedule:
    """Schedule for intervals ``2**b_i`` when ``sum 2**-b_i >= 1``.

    Two agents of interval ``2d`` can stand in for one of interval ``d`` by
    taking alternate visits; unfolding those merges gives each used agent a
    residue class modulo ``2**b_i``. Agents are handed classes in order of
    increasing exponent until the classes tile the integers.
    """
    exps = [int(b) for b in exponents]
    if any(b < 0 for b in exps):
        raise ValueError("exponents must be non-negative")
    if sum((Fraction(1, 2 ** b) for b in exps), Fraction(0)) < 1:
        raise ValueError("reciprocal sum of 2**b is below one")
    order = sorted(range(len(exps)), key=lambda i: (exps[i], i))
    free = [(0, 0)]  # (residue, exponent) classes still unassigned
    used: list[tuple[int, int, int]] = []
    for i in order:
        if not free:
            break
        r, c = free.pop()
        b = exps[i]
        while c < b:
            free.append((r + 2 ** c, c + 1))
            c += 1
        used.append((i, r, b))
    period = max(2 ** b for _, _, b in used)
    assignment = [-1] * period
    for i, r, b in used:
        for t in range(r, period, 2 ** b):
            assignment[t] = i
    assert -1 not in assignment
    return PeriodicVisitSchedule(tuple(assignment))


def sufficient_condition_two(inst: PointInstance | Sequence[int]) -> PeriodicVisitSchedule | None:
    """Schedule when the reciprocal sum is at least two, else ``None``.

    Each interval is rounded up to a power of two below twice its value.
    """
    if not isinstance(inst, PointInstance):
        inst = PointInstance.of(inst)
    if inst.reciprocal_sum() < 2:
        return None
    exps = [(a - 1).bit_length() for a in inst.intervals]
    return power_of_two_schedule(exps)


@dataclass(frozen=True)
class ApproxResult:
    idle: Fraction
    y: Fraction
    exponents: tuple[int, ...]
    schedule: PeriodicVisitSchedule

    @property
    def ticks(self) -> tuple[int, ...]:
        return tuple(2 ** b for b in self.exponents)


def approx_idle_2(intervals: Sequence) -> ApproxResult:
    """Idle time within a factor two of optimal for real-valued intervals.

    With ``y`` solving ``sum y / a_i = 1`` each agent gets a power of two in
    ``[a_i / 2y, a_i / y]``; those powers tile the ticks, and ticks of length
    ``2y`` respect every agent's interval.
    """
    a = [Fraction(x) for x in intervals]
    if not a or any(x <= 0 for x in a):
        raise ValueError("intervals must be positive")
    y = 1 / sum(1 / x for x in a)
    exps = []
    for x in a:
        ratio = x / y  # >= 1
        b = ratio.numerator // ratio.denominator
        exps.append(b.bit_length() - 1)  # 2**b <= ratio < 2**(b+1)
    sched = power_of_two_schedule(exps)
    return ApproxResult(2 * y, y, tuple(exps), sched)


def ceiling_instance(intervals: Sequence, idle) -> PointInstance:
    idle = Fraction(idle)
    return PointInstance(tuple(math.ceil(Fraction(x) / idle) for x in intervals))


def idle_candidates(intervals: Sequence) -> list[Fraction]:
    """Every idle time where some ceiling ``ceil(a_i / T)`` changes, within the feasible range."""
    a = [Fraction(x) for x in intervals]
    lower = 1 / sum(1 / x for x in a)
    upper = min(a)
    cands = set()
    for x in a:
        j_lo = max(1, math.ceil(x / upper))
        j_hi = math.floor(x / lower)
        for j in range(j_lo, j_hi + 1):
            t = x / j
            if lower <= t <= upper:
                cands.add(t)
    cands.add(upper)
    return sorted(cands)


def optimal_idle_exact(intervals: Sequence, max_states: int = DEFAULT_MAX_STATES) -> Fraction:
    """Smallest achievable idle time, found by bisection over the candidate list.

    Idle ``T`` is achievable iff the ceiling tuple ``ceil(a_i / T)`` is good.
    Goodness is monotone in ``T`` and ceilings only change at ``a_i / j``.
    """
    cands = idle_candidates(intervals)

    def ok(t):
        res = solve_discretized(ceiling_instance(intervals, t), max_states=max_states)
        if res.status == "unknown-budget":
            raise BudgetExceeded(f"state budget exhausted at idle {t}")
        return res.good

    lo, hi = 0, len(cands) - 1  # cands[hi] = min a_i is always achievable
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


# ---------------------------------------------------------------------------
# families and reductions


def bad_family(k: int) -> PointInstance:
    if k < 0:
        raise ValueError("k must be non-negative")
    return PointInstance(tuple(2 ** i + 1 for i in range(k + 1)))


def halve_transform(inst: PointInstance | Sequence[int], M: int) -> PointInstance:
    """Shrink a bad tuple with entries up to ``2M`` to a bad tuple with entries up to ``M``.

    Entries above ``M`` are raised to pair up equal values (an odd one out is
    dropped), and each pair ``(x, x)`` becomes one agent ``ceil(x / 2)``.
    """
    if not isinstance(inst, PointInstance):
        inst = PointInstance.of(inst)
    if M < 1:
        raise ValueError("M must be positive")
    a = sorted(inst.intervals)
    if any(x > 2 * M for x in a):
        raise ValueError("every interval must be at most 2M")
    small = [x for x in a if x <= M]
    big = [x for x in a if x > M]
    out = list(small)
    for j in range(0, len(big) - 1, 2):
        out.append(-(-big[j + 1] // 2))
    if not out:
        raise ValueError("transform leaves no agents")
    return PointInstance(tuple(sorted(out)))


def halve_bound(t: Fraction, M: int) -> Fraction:
    return Fraction(M + 1, M + 2) * t - Fraction(1, M + 2)


DEFAULT_BASE = Fraction(1546, 1000)
DEFAULT_THRESHOLD = Fraction(11822, 10000)


def f_value(r: int, base=DEFAULT_BASE, scale_base: int = 12) -> Fraction:
    """Lower bound on the reciprocal sum after ``r`` halving steps down to ``scale_base``."""
    v = Fraction(base)
    for s in range(r - 1, -1, -1):
        m = scale_base * 2 ** s
        v = v * Fraction(m + 1, m + 2) - Fraction(1, m + 2)
    return v


@dataclass(frozen=True)
class FCheck:
    ok: bool
    minimum: Fraction
    argmin: int

    def __bool__(self):
        return self.ok


def f_sequence_check(threshold=DEFAULT_THRESHOLD, base=DEFAULT_BASE, scale_base: int = 12,
                     r_max: int = 64) -> FCheck:
    """Check ``f(r) > threshold`` for ``r = 1..r_max`` exactly."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    threshold = Fraction(threshold)
    vals = [(f_value(r, base, scale_base), r) for r in range(1, r_max + 1)]
    low, arg = min(vals)
    return FCheck(low > threshold, low, arg)


def enumerate_minimal_candidates(bound: int, threshold) -> Iterator[PointInstance]:
    """Sorted tuples with entries ``<= bound`` reaching ``threshold`` only with their last entry.

    Yielded in lexicographic order.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    threshold = Fraction(threshold)
    prefix: list[int] = []

    def rec(lo: int, total: Fraction):
        for b in range(lo, bound + 1):
            s = total + Fraction(1, b)
            if s >= threshold:
                yield PointInstance(tuple(prefix + [b]))
            else:
                # even all-bound continuations never reach: remaining terms are bounded
                prefix.append(b)
                yield from rec(b, s)
                prefix.pop()

    yield from rec(1, Fraction(0))


def alpha_constant(terms: int) -> Fraction:
    return sum((Fraction(1, 2 ** i + 1) for i in range(terms)), Fraction(0))


@dataclass
class CandidateReport:
    checked: int = 0
    states: int = 0
    bad: list[PointInstance] = field(default_factory=list)
    unknown: list[PointInstance] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.bad and not self.unknown


def verify_minimal_candidates(bound: int, threshold=DEFAULT_THRESHOLD,
                              max_states: int = DEFAULT_MAX_STATES) -> CandidateReport:
    """Solve every minimal candidate and validate each schedule found.

    Any tuple with entries ``<= bound`` and reciprocal sum ``>= threshold``
    contains one of these as a sub-multiset, so all of them being good
    settles the bounded case.
    """
    report = CandidateReport()
    for inst in enumerate_minimal_candidates(bound, threshold):
        res = solve_discretized(inst, max_states)
        report.checked += 1
        report.states += res.states
        if res.status == "unknown-budget":
            report.unknown.append(inst)
        elif not res.good or not res.schedule.is_valid_for(inst.intervals):
            report.bad.append(inst)
    return report
