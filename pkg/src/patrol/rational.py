"""Exact rational plumbing shared by every patrolling module.

Times, positions, speeds and lengths are :class:`fractions.Fraction` values
throughout; no floating point enters a verifier or solver.
"""

from __future__ import annotations

import math
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\s*$")


class RationalParseError(ValueError):
    pass


def parse_rational(text: str, max_denominator: int | None = None) -> Fraction:
    """Parse ``p/q`` or an integer exactly.

    Decimal strings are only accepted when ``max_denominator`` is given; the
    conversion is exact and rejected if the reduced denominator exceeds it.
    """
    m = _RATIONAL_RE.match(text)
    if m:
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise RationalParseError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    if _DECIMAL_RE.match(text):
        if max_denominator is None:
            raise RationalParseError(
                f"decimal {text!r} needs an explicit denominator bound")
        value = Fraction(text.strip())
        if value.denominator > max_denominator:
            raise RationalParseError(
                f"{text!r} has denominator {value.denominator} > {max_denominator}")
        return value
    raise RationalParseError(f"not a rational: {text!r}")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def lcm_int(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


def rational_lcm(values: Iterable[Fraction]) -> Fraction:
    """Smallest positive rational that every value divides (integer multiple)."""
    vals = [Fraction(v) for v in values]
    if not vals:
        raise ValueError("empty lcm")
    if any(v <= 0 for v in vals):
        raise ValueError("lcm of non-positive rational")
    num = lcm_int(v.numerator for v in vals)
    den = reduce(math.gcd, (v.denominator for v in vals))
    return Fraction(num, den)


def divides(d: Fraction, p: Fraction) -> bool:
    q = Fraction(p) / Fraction(d)
    return q.denominator == 1 and q > 0


def floor_frac(x: Fraction) -> int:
    return math.floor(x)


def ceil_frac(x: Fraction) -> int:
    return math.ceil(x)


def frac_mod(x: Fraction, p: Fraction) -> Fraction:
    return x - p * math.floor(x / p)


# ---------------------------------------------------------------------------
# Periodic interval sets


@dataclass(frozen=True)
class PeriodicIntervalSet:
    """Union of closed intervals repeated with a fixed period.

    Intervals are held unwrapped as ``(lo, hi)`` with ``0 <= lo < period`` and
    ``lo <= hi <= lo + period``; an interval with ``hi > period`` crosses the
    period seam. ``hi == lo + period`` is the whole line. The canonical text
    form writes a seam-crossing interval as ``[lo, hi - period]`` (lo > hi).
    """

    period: Fraction
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")
        prev_hi = None
        for lo, hi in self.intervals:
            if not (0 <= lo < self.period and lo <= hi <= lo + self.period):
                raise ValueError(f"bad interval [{lo}, {hi}] for period {self.period}")
            if prev_hi is not None and lo <= prev_hi:
                raise ValueError("intervals must be sorted and pairwise disjoint")
            prev_hi = hi
        if len(self.intervals) > 1:
            lo0 = self.intervals[0][0]
            if self.intervals[-1][1] >= lo0 + self.period:
                raise ValueError("last interval overlaps the first across the seam")

    @classmethod
    def from_pairs(cls, period, pairs: Iterable[tuple]) -> "PeriodicIntervalSet":
        """Build from arbitrary (possibly overlapping, unnormalised) closed pairs.

        A pair with ``lo > hi`` after reduction means a seam-crossing interval.
        Overlapping or touching intervals are merged.
        """
        period = Fraction(period)
        raw = []
        for lo, hi in pairs:
            lo, hi = Fraction(lo), Fraction(hi)
            if hi - lo >= period:
                return cls(period, ((Fraction(0), period),))
            if hi < lo:
                hi += period
            base = frac_mod(lo, period)
            raw.append((base, hi - lo + base))
        return cls(period, tuple(_merge_circular(raw, period)))

    @classmethod
    def full(cls, period) -> "PeriodicIntervalSet":
        period = Fraction(period)
        return cls(period, ((Fraction(0), period),))

    @classmethod
    def empty(cls, period) -> "PeriodicIntervalSet":
        return cls(Fraction(period), ())

    @property
    def is_full(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0][1] - self.intervals[0][0] == self.period

    def lengths(self) -> list[Fraction]:
        return [hi - lo for lo, hi in self.intervals]

    def measure(self) -> Fraction:
        return sum(self.lengths(), Fraction(0))

    def contains(self, x) -> bool:
        x = frac_mod(Fraction(x), self.period)
        for lo, hi in self.intervals:
            if lo <= x <= hi or lo <= x + self.period <= hi:
                return True
        return False

    __contains__ = contains

    def repeat(self, new_period) -> "PeriodicIntervalSet":
        """Same set described over a multiple of the period."""
        new_period = Fraction(new_period)
        if not divides(self.period, new_period):
            raise ValueError(f"period {self.period} does not divide {new_period}")
        if self.is_full:
            return PeriodicIntervalSet.full(new_period)
        reps = int(new_period / self.period)
        pairs = [(lo + j * self.period, hi + j * self.period)
                 for j in range(reps) for lo, hi in self.intervals]
        return PeriodicIntervalSet.from_pairs(new_period, pairs)

    def union(self, other: "PeriodicIntervalSet") -> "PeriodicIntervalSet":
        p = rational_lcm([self.period, other.period])
        a, b = self.repeat(p), other.repeat(p)
        return PeriodicIntervalSet.from_pairs(p, list(a.intervals) + list(b.intervals))

    def complement(self) -> "PeriodicIntervalSet":
        """Closure of the complement (endpoints are shared with this set)."""
        if not self.intervals:
            return PeriodicIntervalSet.full(self.period)
        if self.is_full:
            return PeriodicIntervalSet.empty(self.period)
        gaps = []
        n = len(self.intervals)
        for j in range(n):
            hi = self.intervals[j][1]
            nxt = self.intervals[(j + 1) % n][0]
            if j == n - 1:
                nxt += self.period
            if nxt > hi:
                gaps.append((hi, nxt))
        return PeriodicIntervalSet.from_pairs(self.period, gaps)

    def canonical_pairs(self) -> list[tuple[Fraction, Fraction]]:
        out = []
        for lo, hi in self.intervals:
            if hi - lo == self.period:
                out.append((lo, hi))
            elif hi >= self.period:
                out.append((lo, hi - self.period))
            else:
                out.append((lo, hi))
        return out

    def to_text(self) -> str:
        body = " ".join(f"[{lo},{hi}]" for lo, hi in self.canonical_pairs())
        return f"period={self.period}; {body}".rstrip()

    @classmethod
    def from_text(cls, text: str) -> "PeriodicIntervalSet":
        head, _, body = text.partition(";")
        key, _, val = head.partition("=")
        if key.strip() != "period":
            raise ValueError(f"expected 'period=' in {text!r}")
        period = parse_rational(val)
        pairs = []
        for tok in re.findall(r"\[([^\]]*)\]", body):
            lo, hi = tok.split(",")
            pairs.append((parse_rational(lo), parse_rational(hi)))
        # canonical pairs are already disjoint; full-line pairs stay as written
        if len(pairs) == 1 and pairs[0][1] - pairs[0][0] == period:
            return cls.full(period)
        return cls.from_pairs(period, pairs)


def _merge_circular(raw: list[tuple[Fraction, Fraction]], period: Fraction):
    if not raw:
        return []
    raw.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    # fold intervals reaching past the seam onto the leading ones
    while len(merged) > 1 and merged[-1][1] >= merged[0][0] + period:
        first = merged.pop(0)
        merged[-1][1] = max(merged[-1][1], first[1] + period)
    if merged[-1][1] - merged[0][0] >= period and len(merged) == 1:
        if merged[0][1] - merged[0][0] >= period:
            return [(Fraction(0), period)]
    out = []
    for lo, hi in merged:
        if hi - lo >= period:
            return [(Fraction(0), period)]
        out.append((lo, hi))
    return out


@dataclass(frozen=True)
class CoverResult:
    covered: bool
    witness: Fraction | None = None

    def __bool__(self):
        return self.covered


def interval_set_covers_line(sets: Sequence[PeriodicIntervalSet], common_period) -> CoverResult:
    """Decide whether the union of periodic sets is the whole real line.

    Raises ``ValueError`` if some set's period does not divide ``common_period``.
    """
    common_period = Fraction(common_period)
    pieces: list[tuple[Fraction, Fraction]] = []
    for s in sets:
        if not divides(s.period, common_period):
            raise ValueError(f"period {s.period} does not divide {common_period}")
        if s.is_full:
            return CoverResult(True)
        reps = int(common_period / s.period)
        for j in range(reps):
            off = j * s.period
            for lo, hi in s.intervals:
                pieces.append((lo + off, hi + off))
    if not pieces:
        return CoverResult(False, common_period / 2)
    pieces.sort()
    # sweep one period starting at the first piece, seam-crossing pieces
    # are also seen shifted back by a period
    extra = [(lo - common_period, hi - common_period) for lo, hi in pieces if hi > common_period]
    pieces = sorted(extra + pieces)
    reach = Fraction(0)
    started = False
    for lo, hi in pieces:
        if not started:
            if lo > 0:
                return CoverResult(False, lo / 2 if lo < common_period else common_period / 2)
            started = True
            reach = hi
            continue
        if lo > reach:
            return CoverResult(False, (reach + lo) / 2)
        reach = max(reach, hi)
        if reach >= common_period:
            return CoverResult(True)
    if reach >= common_period:
        return CoverResult(True)
    return CoverResult(False, (reach + common_period) / 2)


# ---------------------------------------------------------------------------
# Trajectories


@dataclass(frozen=True)
class Trajectory:
    """Periodic piecewise-linear motion.

    ``breakpoints`` are ``(time, position)`` with strictly increasing times in
    ``[0, period)``. Motion is linear between consecutive breakpoints and from
    the last one to the first shifted by ``period``; ``drift`` is the position
    gained per period (zero on a fence, a multiple of the perimeter on a
    circle).
    """

    period: Fraction
    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    drift: Fraction = Fraction(0)

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("trajectory period must be positive")
        if not self.breakpoints:
            raise ValueError("trajectory needs at least one breakpoint")
        prev = None
        for t, _ in self.breakpoints:
            if not 0 <= t < self.period:
                raise ValueError(f"breakpoint time {t} outside [0, {self.period})")
            if prev is not None and t <= prev:
                raise ValueError("breakpoint times must strictly increase")
            prev = t

    @classmethod
    def make(cls, period, points: Iterable[tuple], drift=0) -> "Trajectory":
        """Normalise arbitrary-time breakpoints of one period into canonical form.

        ``points`` must describe one full period of motion in time order,
        covering a time span shorter than ``period``; times are reduced modulo
        the period and the list rotated. Positions are shifted by whole drifts
        as times wrap.
        """
        period, drift = Fraction(period), Fraction(drift)
        norm = []
        for t, x in points:
            t, x = Fraction(t), Fraction(x)
            k = math.floor(t / period)
            norm.append((t - k * period, x - k * drift))
        norm.sort()
        dedup: list[tuple[Fraction, Fraction]] = []
        for t, x in norm:
            if dedup and dedup[-1][0] == t:
                if dedup[-1][1] != x:
                    raise ValueError(f"discontinuous trajectory at time {t}")
                continue
            dedup.append((t, x))
        return cls(period, tuple(dedup), drift)

    @classmethod
    def stationary(cls, x, period=1) -> "Trajectory":
        return cls(Fraction(period), ((Fraction(0), Fraction(x)),))

    def segments(self, copies: int = 1):
        """Yield ``(t0, x0, t1, x1)`` cyclic segments for ``copies`` periods.

        The segments of one copy span ``[t_first, t_first + period]``.
        """
        bps = self.breakpoints
        n = len(bps)
        for c in range(copies):
            toff = c * self.period
            xoff = c * self.drift
            for j in range(n):
                t0, x0 = bps[j]
                if j + 1 < n:
                    t1, x1 = bps[j + 1]
                else:
                    t1, x1 = bps[0][0] + self.period, bps[0][1] + self.drift
                yield (t0 + toff, x0 + xoff, t1 + toff, x1 + xoff)

    def position(self, t) -> Fraction:
        t = Fraction(t)
        k = math.floor(t / self.period)
        tr = t - k * self.period
        bps = self.breakpoints
        times = [b[0] for b in bps]
        j = bisect_right(times, tr) - 1
        if j < 0:
            t0, x0 = bps[-1][0] - self.period, bps[-1][1] - self.drift
            t1, x1 = bps[0]
        else:
            t0, x0 = bps[j]
            if j + 1 < len(bps):
                t1, x1 = bps[j + 1]
            else:
                t1, x1 = bps[0][0] + self.period, bps[0][1] + self.drift
        frac = (tr - t0) / (t1 - t0) if t1 != t0 else Fraction(0)
        return x0 + (x1 - x0) * frac + k * self.drift

    def max_speed(self) -> Fraction:
        best = Fraction(0)
        for t0, x0, t1, x1 in self.segments():
            s = abs(x1 - x0) / (t1 - t0)
            if s > best:
                best = s
        return best

    def repeat(self, new_period) -> "Trajectory":
        new_period = Fraction(new_period)
        if not divides(self.period, new_period):
            raise ValueError(f"period {self.period} does not divide {new_period}")
        reps = int(new_period / self.period)
        pts = [(t + j * self.period, x + j * self.drift)
               for j in range(reps) for t, x in self.breakpoints]
        return Trajectory(new_period, tuple(pts), self.drift * reps)

    def scaled(self, gamma) -> "Trajectory":
        gamma = Fraction(gamma)
        return Trajectory(self.period * gamma,
                          tuple((t * gamma, x * gamma) for t, x in self.breakpoints),
                          self.drift * gamma)

    def is_monotone(self) -> bool:
        return all(x1 >= x0 for _, x0, _, x1 in self.segments())


def trajectory_speed_ok(traj: Trajectory, v) -> bool:
    """True iff no segment moves faster than ``v``."""
    return traj.max_speed() <= Fraction(v)
