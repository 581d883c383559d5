"""Covering systems, residue classes and point patrolling at prescribed times.

Exact small-scale solvers for disjoint covering systems (every integer in
exactly one class), disjoint residue classes (every integer in at most one
class) and patrolling a finite set of times, plus the reductions from
vertex cover on triangle-free graphs and from numerical 3-dimensional
matching used to show these problems hard.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .point import BudgetExceeded, solve_discretized
from .rational import lcm_int

DEFAULT_LCM_BUDGET = 1 << 24
DEFAULT_SEARCH_BUDGET = 10**7


@dataclass(frozen=True)
class CoveringSystem:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        for m, r in self.pairs:
            m, r = int(m), int(r)
            if m <= 0:
                raise ValueError(f"modulus must be positive, got {m}")
            norm.append((m, r % m))
        object.__setattr__(self, "pairs", tuple(norm))

    @classmethod
    def of(cls, moduli: Sequence[int], residues: Sequence[int]) -> "CoveringSystem":
        if len(moduli) != len(residues):
            raise ValueError("moduli and residues differ in length")
        return cls(tuple(zip(moduli, residues)))

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.pairs)

    @property
    def residues(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.pairs)

    def density(self) -> Fraction:
        return sum((Fraction(1, m) for m in self.moduli), Fraction(0))


def _check_lcm(moduli: Sequence[int], budget: int) -> int:
    period = lcm_int(moduli)
    if period > budget:
        raise BudgetExceeded(f"lcm {period} exceeds the budget {budget}")
    return period


def hit_counts(sys: CoveringSystem, lcm_budget: int = DEFAULT_LCM_BUDGET) -> list[int]:
    """How many classes contain each residue modulo the lcm of the moduli."""
    period = _check_lcm(sys.moduli, lcm_budget)
    counts = [0] * period
    for m, r in sys.pairs:
        for x in range(r, period, m):
            counts[x] += 1
    return counts


def is_dcs(sys: CoveringSystem, lcm_budget: int = DEFAULT_LCM_BUDGET) -> bool:
    """Every integer lies in exactly one class."""
    if not sys.pairs:
        return False
    ok = all(c == 1 for c in hit_counts(sys, lcm_budget))
    if ok:
        assert sys.density() == 1
    return ok


def find_dcs(moduli: Sequence[int], lcm_budget: int = DEFAULT_LCM_BUDGET,
             budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[int, ...] | None:
    """Residues turning ``moduli`` into a disjoint covering system, or ``None``.

    Exact cover over one lcm period kept as a bitmask: the lowest uncovered
    class must be the start of one of the unused moduli. Moduli are taken
    largest first and equal moduli are tried once per node.
    """
    moduli = [int(m) for m in moduli]
    if not moduli or any(m <= 0 for m in moduli):
        raise ValueError("moduli must be positive")
    if sum(Fraction(1, m) for m in moduli) != 1:
        return None
    period = _check_lcm(moduli, lcm_budget)
    full = (1 << period) - 1
    stripe = {}
    for m in set(moduli):
        mask = 0
        for x in range(0, period, m):
            mask |= 1 << x
        stripe[m] = mask
    order = sorted(range(len(moduli)), key=lambda i: -moduli[i])
    used = [False] * len(moduli)
    residues = [0] * len(moduli)
    nodes = 0

    def rec(covered: int) -> bool:
        nonlocal nodes
        if covered == full:
            return True
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"more than {budget} search nodes")
        x = (~covered & (covered + 1)).bit_length() - 1  # lowest free class
        tried = set()
        for i in order:
            m = moduli[i]
            if used[i] or m in tried:
                continue
            tried.add(m)
            mask = stripe[m] << (x % m)
            if mask & covered:
                continue
            used[i] = True
            residues[i] = x % m
            if rec(covered | mask):
                return True
            used[i] = False
        return False

    return tuple(residues) if rec(0) else None


def dcs_equivalence_check(moduli: Sequence[int],
                          point_solver: Callable = solve_discretized) -> bool:
    """Cross-check ``find_dcs`` with the point solver on moduli of density one.

    Raises ``AssertionError`` when the two disagree; returns the shared verdict.
    """
    moduli = [int(m) for m in moduli]
    if sum(Fraction(1, m) for m in moduli) != 1:
        raise ValueError("reciprocals of the moduli must sum to 1")
    covering = find_dcs(moduli) is not None
    good = point_solver(moduli).good
    if covering != good:
        raise AssertionError(f"{moduli}: covering system {covering}, point instance good {good}")
    return good


def is_drc(sys: CoveringSystem) -> bool:
    """No integer lies in two classes; pairwise gcd test."""
    pairs = sys.pairs
    for (m1, r1), (m2, r2) in itertools.combinations(pairs, 2):
        if (r1 - r2) % math.gcd(m1, m2) == 0:
            return False
    return True


def _factor(m: int) -> dict[int, int]:
    out = {}
    q = 2
    while q * q <= m:
        while m % q == 0:
            out[q] = out.get(q, 0) + 1
            m //= q
        q += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def find_drc(moduli: Sequence[int], budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[int, ...] | None:
    """Residues making ``moduli`` a disjoint residue class, or ``None``.

    A residue is kept as its base-``q`` digits for each prime ``q`` of its
    modulus; two classes meet iff for every shared prime their digit strings
    agree up to the smaller exponent. Relabelling the digits below a common
    prefix is a symmetry, so at each prefix only the digits already used
    there plus one fresh digit are tried.
    """
    moduli = [int(m) for m in moduli]
    if any(m <= 0 for m in moduli):
        raise ValueError("moduli must be positive")
    facts = [_factor(m) for m in moduli]
    k = len(moduli)
    digits: list[dict[int, tuple[int, ...]]] = [dict() for _ in range(k)]
    # children[q][prefix] = number of distinct digits used below prefix
    children: dict[int, dict[tuple[int, ...], int]] = {}
    nodes = 0

    def meets(i: int, j: int) -> bool:
        for q, e in facts[i].items():
            f = min(e, facts[j].get(q, 0))
            if f and digits[i][q][:f] != digits[j][q][:f]:
                return False
        return True

    def strings(q: int, e: int) -> Iterator[tuple[int, ...]]:
        tree = children.setdefault(q, {})

        def rec(prefix):
            if len(prefix) == e:
                yield prefix
                return
            used = tree.get(prefix, 0)
            for d in range(min(used + 1, q)):
                yield from rec(prefix + (d,))
        yield from rec(())

    def mark(q: int, s: tuple[int, ...], undo: list):
        tree = children.setdefault(q, {})
        for n in range(len(s)):
            prefix = s[:n]
            if s[n] == tree.get(prefix, 0):  # fresh digit
                tree[prefix] = s[n] + 1
                undo.append((q, prefix, s[n]))

    def assign(i: int, primes: list[int], p: int) -> bool:
        nonlocal nodes
        if p == len(primes):
            if any(meets(i, j) for j in range(i)):
                return False
            return rec(i + 1)
        q = primes[p]
        for s in strings(q, facts[i][q]):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"more than {budget} search nodes")
            digits[i][q] = s
            undo: list = []
            mark(q, s, undo)
            if assign(i, primes, p + 1):
                return True
            for q2, prefix, old in reversed(undo):
                children[q2][prefix] = old
            del digits[i][q]
        return False

    def rec(i: int) -> bool:
        if i == k:
            return True
        return assign(i, sorted(facts[i]), 0)

    if not rec(0):
        return None
    residues = []
    for i, m in enumerate(moduli):
        r, mod = 0, 1
        for q, e in facts[i].items():
            pe = q ** e
            val = sum(d * q ** n for n, d in enumerate(digits[i][q]))
            # combine r (mod mod) with val (mod pe)
            r = r + mod * ((val - r) * pow(mod, -1, pe) % pe)
            mod *= pe
        residues.append(r % m)
    return tuple(residues)


# ---------------------------------------------------------------------------
# vertex cover on triangle-free graphs


@dataclass(frozen=True)
class TriangleFreeGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self loop at {u}")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ValueError("repeated edge")
        object.__setattr__(self, "edges", tuple(norm))
        adj = self.adjacency()
        for u, v in norm:
            common = adj[u] & adj[v]
            if common:
                raise ValueError(f"triangle {u}, {v}, {min(common)}")

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def vertex_cover(g: TriangleFreeGraph, k: int) -> tuple[int, ...] | None:
    """Some vertex cover with at most ``k`` vertices, by enumeration."""
    for size in range(min(k, g.n) + 1):
        for cover in itertools.combinations(range(g.n), size):
            cs = set(cover)
            if all(u in cs or v in cs for u, v in g.edges):
                return cover
    return None


def primes_above(n: int, count: int) -> list[int]:
    """The ``count`` smallest primes greater than ``n``."""
    out = []
    limit = max(16, 2 * (n + 2))
    while len(out) < count:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
        out = [p for p in range(n + 1, limit + 1) if sieve[p]][:count]
        limit *= 2
    return out


def vc_to_drc(g: TriangleFreeGraph, k: int) -> tuple[int, ...]:
    """One modulus ``k p_u p_v`` per edge, ``p`` the vertex primes.

    Vertex ``j`` gets the ``j``-th smallest prime above ``n``. The moduli
    admit disjoint residue classes iff ``g`` has a vertex cover of size at
    most ``k``; this needs ``k`` coprime to every vertex prime.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    primes = primes_above(g.n, g.n)
    for p in primes:
        if k % p == 0:
            raise ValueError(f"k={k} shares the prime {p} with a vertex label")
    return tuple(k * primes[u] * primes[v] for u, v in g.edges)


# ---------------------------------------------------------------------------
# patrolling prescribed times


@dataclass(frozen=True)
class GPPInstance:
    times: tuple[int, ...]
    intervals: tuple[int, ...]

    def __post_init__(self):
        times = tuple(sorted(set(int(t) for t in self.times)))
        if not times:
            raise ValueError("the set of times must be non-empty")
        if any(int(a) <= 0 for a in self.intervals):
            raise ValueError("intervals must be positive")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "intervals", tuple(int(a) for a in self.intervals))


def gpp_assignment_ok(inst: GPPInstance, assignment: dict[int, int]) -> bool:
    if set(assignment) != set(inst.times):
        return False
    last: dict[int, int] = {}
    for t in inst.times:
        i = assignment[t]
        if not 0 <= i < len(inst.intervals):
            return False
        if i in last and t - last[i] < inst.intervals[i]:
            return False
        last[i] = t
    return True


def solve_gpp(inst: GPPInstance, budget: int = DEFAULT_SEARCH_BUDGET) -> dict[int, int] | None:
    """Agent per required time with every agent's visits ``a_i`` apart, or ``None``.

    Times are served in increasing order. Agents with equal gap and equal
    last visit are interchangeable, so only the lowest index among them is
    tried; failed states are memoised with last visits that no longer
    matter forgotten. The lowest usable index is tried first.
    """
    times, a = inst.times, inst.intervals
    k = len(a)
    last: list[int | None] = [None] * k
    chosen: list[int] = []
    failed: set = set()
    nodes = 0

    def key(idx: int):
        t = times[idx]
        groups: dict[int, list] = {}
        for i in range(k):
            li = last[i]
            busy = li is not None and t - li < a[i]
            groups.setdefault(a[i], []).append(li if busy else None)
        return idx, tuple(sorted((g, tuple(sorted(v, key=lambda x: (x is not None, x or 0))))
                                 for g, v in groups.items()))

    def rec(idx: int) -> bool:
        nonlocal nodes
        if idx == len(times):
            return True
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"more than {budget} search nodes")
        kk = key(idx)
        if kk in failed:
            return False
        t = times[idx]
        seen = set()
        for i in range(k):
            li = last[i]
            if li is not None and t - li < a[i]:
                continue
            sig = (a[i], li)
            if sig in seen:
                continue
            seen.add(sig)
            last[i] = t
            chosen.append(i)
            if rec(idx + 1):
                return True
            chosen.pop()
            last[i] = li
        failed.add(kk)
        return False

    if not rec(0):
        return None
    return dict(zip(times, chosen))


# ---------------------------------------------------------------------------
# numerical 3-dimensional matching


@dataclass(frozen=True)
class N3DMInstance:
    x: tuple[int, ...]
    y: tuple[int, ...]
    z: tuple[int, ...]
    b: int

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        object.__setattr__(self, "b", int(self.b))
        if not (len(self.x) == len(self.y) == len(self.z)) or not self.x:
            raise ValueError("x, y and z must be non-empty and of equal length")
        if min(self.x + self.y + self.z) < 0:
            raise ValueError("entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.x)

    def balanced(self) -> bool:
        return sum(self.x) + sum(self.y) + sum(self.z) == self.n * self.b


def n3dm_matching(inst: N3DMInstance) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Permutations ``p, q`` with ``x[p[i]] + y[q[i]] + z[i] == b`` for all ``i``, by enumeration."""
    n = inst.n
    for p in itertools.permutations(range(n)):
        need = [inst.b - inst.x[p[i]] - inst.z[i] for i in range(n)]
        for q in itertools.permutations(range(n)):
            if all(inst.y[q[i]] == need[i] for i in range(n)):
                return p, q
    return None


def _tagged(inst: N3DMInstance) -> tuple[list[int], list[int], list[int], int]:
    """Make ``x`` and ``y`` duplicate-free without changing the answer.

    Values are scaled by ``W = 2n + 1`` and ``x_i``, ``y_j`` get the tags
    ``i`` and ``j``; with ``b' = W b + W - 1`` each triple satisfies
    ``x' + y' + z' <= b'`` iff ``x + y + z <= b``. The instance is no longer
    balanced, but a schedule still forces every triple to that inequality,
    and summing the untagged inequalities against the balanced sum forces
    equality.
    """
    n = inst.n
    if len(set(inst.x)) == n and len(set(inst.y)) == n:
        return list(inst.x), list(inst.y), list(inst.z), inst.b
    w = 2 * n + 1
    x = [w * v + i for i, v in enumerate(inst.x)]
    y = [w * v + j for j, v in enumerate(inst.y)]
    z = [w * v for v in inst.z]
    return x, y, z, w * inst.b + w - 1


def min_reduction_m(inst: N3DMInstance) -> int:
    """Smallest ``M`` for which each agent can serve at most one time per half."""
    x, y, z, b = _tagged(inst)
    # halves apart: M - max(y) > max(x); within a half: span < M - b + min(z)
    return max(max(x) + max(y) + 1,
               max(max(x) - min(x), max(y) - min(y)) + b - min(z) + 1,
               b - min(z) + 1)


def default_reduction_m(inst: N3DMInstance) -> int:
    x, y, z, b = _tagged(inst)
    return max(x) + max(y) + b + max(z) + 1


def n3dm_to_gpp(inst: N3DMInstance, M: int | None = None) -> GPPInstance:
    """Times ``x_i`` and ``M - y_j``; agent ``i`` needs gap ``M - b + z_i``."""
    if not inst.balanced():
        raise ValueError("sum of x, y and z must equal n * b")
    x, y, z, b = _tagged(inst)
    if M is None:
        M = default_reduction_m(inst)
    need = min_reduction_m(inst)
    if M < need:
        raise ValueError(f"M={M} too small, need at least {need}")
    return GPPInstance(tuple(x) + tuple(M - v for v in y), tuple(M - b + v for v in z))
