from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from patrol.fence import FenceSchedule, oscillator, verify_fence_coverage
from patrol.rational import Trajectory
from patrol.sweep import check_idle, max_cyclic_gap

from . import oracles


def test_cyclic_gap_basics():
    assert max_cyclic_gap([], F(3))[0] == 6
    assert max_cyclic_gap([(F(0), F(5))], F(3))[0] == 0
    gap, start = max_cyclic_gap([(F(0), F(0)), (F(1), F(1))], F(3))
    assert (gap, start) == (2, 1)
    # wrapping interval
    gap, _ = max_cyclic_gap([(F(5, 2), F(7, 2))], F(3))
    assert gap == 2


def test_exact_gap_is_legal():
    # one agent shuttling over [0, 1/2] at speed 1 returns every time unit
    piece_set = oscillator(0, F(1, 2), 1).segments()
    assert check_idle(piece_set, 0, F(1, 2), 1, 1).ok
    assert not check_idle(piece_set, 0, F(1, 2), 1, F(99, 100)).ok


def test_unvisited_slab_reported():
    pieces = [(F(0), F(0), F(1), F(0)), (F(0), F(1), F(1), F(1))]
    v = check_idle(pieces, 0, 1, 1, 1)
    assert not v.ok and 0 < v.witness[0] < 1


@st.composite
def small_fences(draw):
    k = draw(st.integers(1, 3))
    agents = []
    for _ in range(k):
        v = F(draw(st.integers(1, 3)), draw(st.integers(1, 2)))
        lo = F(draw(st.integers(0, 4)), 4)
        hi = lo + F(draw(st.integers(0, 4)), 4)
        phase = F(draw(st.integers(0, 7)), 4)
        agents.append((v, oscillator(lo, hi, v, phase)))
    length = F(draw(st.integers(1, 8)), 4)
    idle = F(draw(st.integers(2, 8)), 4)
    return FenceSchedule.build(length, idle, agents)


@settings(max_examples=120, deadline=None)
@given(small_fences())
def test_sweep_agrees_with_sampling(s):
    v = verify_fence_coverage(s)
    if v.ok:
        assert oracles.sampled_gap(s.agents, s.length, s.period, s.idle, 12, 12) is None
    else:
        x, t = v.witness
        assert 0 <= x <= s.length
        assert oracles.open_window_free(s.agents, x, t, s.idle)


def test_stationary_agent_leaves_far_end():
    s = FenceSchedule.build(1, 1, [(1, Trajectory.stationary(0))])
    v = verify_fence_coverage(s)
    assert not v.ok and v.witness[0] > 0
