"""Fence patrolling schedules and their exact verification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rational import Trajectory, divides, rational_lcm, trajectory_speed_ok
from .sweep import SweepVerdict, check_idle


@dataclass(frozen=True)
class FenceAgent:
    speed: Fraction
    trajectory: Trajectory


@dataclass(frozen=True)
class FenceSchedule:
    length: Fraction
    idle: Fraction
    agents: tuple[FenceAgent, ...]
    period: Fraction

    def __post_init__(self):
        if self.length < 0 or self.idle <= 0 or self.period <= 0:
            raise ValueError("fence length must be >= 0, idle and period positive")
        for a in self.agents:
            if a.speed <= 0:
                raise ValueError("agent speeds must be positive")
            if not divides(a.trajectory.period, self.period):
                raise ValueError(
                    f"trajectory period {a.trajectory.period} does not divide {self.period}")

    @classmethod
    def build(cls, length, idle, agents: Sequence[tuple]) -> "FenceSchedule":
        """Assemble from ``(speed, trajectory)`` pairs using the lcm of periods."""
        agents = tuple(FenceAgent(Fraction(v), tr) for v, tr in agents)
        period = rational_lcm(a.trajectory.period for a in agents) if agents else Fraction(1)
        return cls(Fraction(length), Fraction(idle), agents, period)

    def speeds_ok(self) -> bool:
        return all(trajectory_speed_ok(a.trajectory, a.speed) for a in self.agents)

    def with_length(self, length) -> "FenceSchedule":
        return FenceSchedule(Fraction(length), self.idle, self.agents, self.period)

    def scaled(self, gamma) -> "FenceSchedule":
        """Scale time and space together; speeds are unchanged."""
        gamma = Fraction(gamma)
        return FenceSchedule(self.length * gamma, self.idle * gamma,
                             tuple(FenceAgent(a.speed, a.trajectory.scaled(gamma))
                                   for a in self.agents),
                             self.period * gamma)

    def total_speed(self) -> Fraction:
        return sum((a.speed for a in self.agents), Fraction(0))


def oscillator(lo, hi, speed, t_at_lo=0) -> Trajectory:
    """Back and forth between ``lo`` and ``hi`` at full speed, at ``lo`` at time ``t_at_lo``."""
    lo, hi, speed, t_at_lo = Fraction(lo), Fraction(hi), Fraction(speed), Fraction(t_at_lo)
    if hi == lo:
        return Trajectory.stationary(lo)
    half = (hi - lo) / speed
    return Trajectory.make(2 * half, [(t_at_lo, lo), (t_at_lo + half, hi)])


def partition_strategy(speeds: Sequence) -> FenceSchedule:
    """Agent ``i`` sweeps its own segment of length ``v_i / 2``; idle time 1."""
    speeds = [Fraction(v) for v in speeds]
    if not speeds or any(v <= 0 for v in speeds):
        raise ValueError("speeds must be positive")
    agents = []
    left = Fraction(0)
    for v in speeds:
        agents.append((v, oscillator(left, left + v / 2, v)))
        left += v / 2
    return FenceSchedule.build(left, 1, agents)


def partition_length(n: int, L: int) -> Fraction:
    """Fence length the partition strategy reaches with the agents of ``build_43_schedule(n, L)``."""
    if n < 1 or L < 1:
        raise ValueError("n and L must be positive")
    return (n + L - 1 + Fraction(n * L, 2 * n - 1)) / 2


def build_43_schedule(n: int, L: int) -> FenceSchedule:
    """Fence ``[0, L]`` with idle time 1 using ``n + L - 1`` fast and ``n L`` slow agents.

    Fast agents (speed 1) ``A_i``, ``-n < i < L``, shuttle between ``i`` and
    ``i + n - 1/2`` and sit at ``i`` at time 0. Slow agents (speed
    ``1/(2n-1)``) ``B_{i,j}`` shuttle between ``i + 1/2`` and ``i + 1`` and sit
    at ``i + 1/2`` at time ``j + 1/2``. Every trajectory has period ``2n - 1``.
    """
    if n < 1 or L < 1:
        raise ValueError("n and L must be positive")
    half = Fraction(1, 2)
    slow = Fraction(1, 2 * n - 1)
    agents = []
    for i in range(-n + 1, L):
        agents.append((Fraction(1), oscillator(i, i + n - half, 1, 0)))
    for i in range(L):
        for j in range(n):
            agents.append((slow, oscillator(i + half, i + 1, slow, j + half)))
    return FenceSchedule.build(L, 1, agents)


def fence_pieces(s: FenceSchedule):
    pieces = []
    for a in s.agents:
        tr = a.trajectory
        copies = int(s.period / tr.period)
        pieces.extend(tr.segments(copies))
    return pieces


def verify_fence_coverage(s: FenceSchedule) -> SweepVerdict:
    """Exact decision whether ``s`` patrols ``[0, L]`` with its idle time.

    A failing verdict carries a witness ``(x, t)``: no agent is at ``x``
    during ``[t, t + T)``.
    """
    if not s.speeds_ok():
        raise ValueError("some trajectory exceeds its agent's speed limit")
    return check_idle(fence_pieces(s), 0, s.length, s.period, s.idle)
