import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patrol.covering import (
    CoveringSystem,
    GPPInstance,
    N3DMInstance,
    TriangleFreeGraph,
    dcs_equivalence_check,
    find_dcs,
    find_drc,
    gpp_assignment_ok,
    is_dcs,
    is_drc,
    min_reduction_m,
    n3dm_matching,
    n3dm_to_gpp,
    primes_above,
    solve_gpp,
    vc_to_drc,
    vertex_cover,
)
from patrol.point import BudgetExceeded

from . import oracles


@pytest.mark.parametrize("pairs, expect", [
    (((1, 0),), True), (((2, 0), (4, 1), (4, 3)), True), (((2, 0), (3, 1), (6, 5)), False)])
def test_is_dcs_examples(pairs, expect):
    assert is_dcs(CoveringSystem(pairs)) == expect


def test_residues_normalized():
    assert CoveringSystem(((3, -1), (4, 9))).pairs == ((3, 2), (4, 1))
    with pytest.raises(ValueError):
        CoveringSystem(((0, 1),))


def test_find_dcs_examples():
    r = find_dcs((2, 4, 4))
    assert r is not None and is_dcs(CoveringSystem.of((2, 4, 4), r))
    assert find_dcs((2, 3, 6)) is None
    assert not oracles.dcs_exists((2, 3, 6))
    assert find_dcs((3, 3, 3)) == (0, 1, 2)


def test_find_dcs_lcm_budget():
    with pytest.raises(BudgetExceeded):
        find_dcs((2, 3, 6), lcm_budget=5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 8), min_size=1, max_size=4))
def test_find_dcs_vs_brute_force(moduli):
    r = find_dcs(moduli)
    assert (r is not None) == oracles.dcs_exists(moduli)
    if r is not None:
        sys = CoveringSystem.of(moduli, r)
        assert all(c == 1 for c in oracles.hits_mod_lcm(sys.pairs))
        assert sys.density() == 1


@pytest.mark.parametrize("moduli, expect", [((2, 4, 4), True), ((2, 3, 6), False), ((4, 4, 4, 4), True)])
def test_dcs_equivalence_examples(moduli, expect):
    assert dcs_equivalence_check(moduli) is expect


def test_dcs_equivalence_needs_unit_density():
    with pytest.raises(ValueError):
        dcs_equivalence_check((2, 3))


@pytest.mark.parametrize("pairs, expect", [
    (((2, 0), (2, 1)), True), (((2, 0), (4, 2)), False), (((35, 0), (77, 1)), True)])
def test_is_drc_examples(pairs, expect):
    assert is_drc(CoveringSystem(pairs)) == expect


def test_is_drc_vs_enumeration():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(1, 5)
        pairs = [(m, rng.randrange(m)) for m in (rng.randint(1, 30) for _ in range(k))]
        if math.lcm(*(m for m, _ in pairs)) > 10 ** 6:
            continue
        assert is_drc(CoveringSystem(tuple(pairs))) == oracles.drc_by_enumeration(pairs)


@pytest.mark.parametrize("moduli, found", [((2, 2), True), ((2, 2, 2), False), ((35, 77), True)])
def test_find_drc_examples(moduli, found):
    r = find_drc(moduli)
    assert (r is not None) == found
    if r is not None:
        assert is_drc(CoveringSystem.of(moduli, r))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=4))
def test_find_drc_vs_brute_force(moduli):
    r = find_drc(moduli)
    assert (r is not None) == oracles.drc_exists(moduli)
    if r is not None:
        assert oracles.drc_by_enumeration(list(zip(moduli, r)))


def test_triangle_rejected():
    with pytest.raises(ValueError):
        TriangleFreeGraph(3, ((0, 1), (1, 2), (0, 2)))
    with pytest.raises(ValueError):
        TriangleFreeGraph(2, ((0, 0),))


def test_primes_above():
    assert primes_above(3, 3) == [5, 7, 11]
    assert primes_above(0, 4) == [2, 3, 5, 7]


def test_path_reduction():
    g = TriangleFreeGraph(3, ((0, 1), (1, 2)))
    moduli = vc_to_drc(g, 1)
    assert moduli == (35, 77)
    assert find_drc(moduli) is not None
    assert vertex_cover(g, 1) == (1,)


def test_five_cycle_reduction():
    g = TriangleFreeGraph(5, tuple((i, (i + 1) % 5) for i in range(5)))
    assert find_drc(vc_to_drc(g, 2)) is None and vertex_cover(g, 2) is None
    assert find_drc(vc_to_drc(g, 3)) is not None and vertex_cover(g, 3) is not None


def test_single_edge_reduction():
    g = TriangleFreeGraph(2, ((0, 1),))
    assert vc_to_drc(g, 1) == (15,)
    assert find_drc((15,)) is not None and vertex_cover(g, 1) is not None


def test_reduction_rejects_shared_prime():
    g = TriangleFreeGraph(2, ((0, 1),))
    with pytest.raises(ValueError):
        vc_to_drc(g, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vc_reduction_small_graphs(n):
    for edges in oracles.triangle_free_graphs(n):
        g = TriangleFreeGraph(n, tuple(edges))
        for k in range(1, n + 1):
            assert (find_drc(vc_to_drc(g, k)) is not None) == oracles.has_cover(n, edges, k)


@pytest.mark.parametrize("times, a, ok", [((0,), (5,), True), ((0, 1), (5,), False),
                                          ((1, 99), (98,), True)])
def test_gpp_examples(times, a, ok):
    inst = GPPInstance(times, a)
    res = solve_gpp(inst)
    assert (res is not None) == ok
    if ok:
        assert gpp_assignment_ok(inst, res) and set(res.values()) == {0}


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 12), min_size=1, max_size=6), st.lists(st.integers(1, 6), min_size=1, max_size=3))
def test_gpp_vs_brute_force(times, a):
    inst = GPPInstance(tuple(times), tuple(a))
    res = solve_gpp(inst)
    assert (res is not None) == oracles.gpp_feasible(times, a)
    if res is not None:
        assert gpp_assignment_ok(inst, res)


def test_gpp_assignment_checker():
    inst = GPPInstance((0, 2, 4), (3, 3))
    assert gpp_assignment_ok(inst, {0: 0, 2: 1, 4: 0})
    assert not gpp_assignment_ok(inst, {0: 0, 2: 0, 4: 1})
    assert not gpp_assignment_ok(inst, {0: 0, 2: 1})


def test_n3dm_single_triple():
    inst = N3DMInstance((1,), (1,), (1,), 3)
    g = n3dm_to_gpp(inst, 100)
    assert g.times == (1, 99) and g.intervals == (98,)
    assert solve_gpp(g) is not None and n3dm_matching(inst) is not None


def _balanced_no_match(n, top):
    for vals in itertools.product(range(top + 1), repeat=3 * n):
        x, y, z = vals[:n], vals[n:2 * n], vals[2 * n:]
        total = sum(vals)
        if total % n:
            continue
        inst = N3DMInstance(x, y, z, total // n)
        if not oracles.matching_exists(x, y, z, inst.b):
            return inst
    return None


def test_n3dm_balanced_no_match():
    inst = _balanced_no_match(2, 2)
    assert inst is not None and n3dm_matching(inst) is None
    assert solve_gpp(n3dm_to_gpp(inst)) is None


def test_n3dm_rejections():
    with pytest.raises(ValueError):
        n3dm_to_gpp(N3DMInstance((1, 2), (1, 2), (1, 2), 5))
    inst = N3DMInstance((1,), (1,), (1,), 3)
    with pytest.raises(ValueError):
        n3dm_to_gpp(inst, min_reduction_m(inst) - 1)


def test_n3dm_one_triple_always_matches():
    for x, y, z in itertools.product(range(4), repeat=3):
        inst = N3DMInstance((x,), (y,), (z,), x + y + z)
        assert solve_gpp(n3dm_to_gpp(inst)) is not None


@pytest.mark.parametrize("x, y, z, b", [((1, 1, 2), (2, 2, 0), (1, 1, 2), 4),
                                         ((0, 0, 3), (1, 1, 1), (2, 2, 2), 4)])
def test_n3dm_duplicates(x, y, z, b):
    inst = N3DMInstance(x, y, z, b)
    assert inst.balanced()
    expect = oracles.matching_exists(inst.x, inst.y, inst.z, inst.b)
    assert (solve_gpp(n3dm_to_gpp(inst)) is not None) == expect


def _random_balanced(rng, n, top):
    while True:
        vals = [rng.randint(0, top) for _ in range(3 * n)]
        if sum(vals) % n == 0:
            return N3DMInstance(vals[:n], vals[n:2 * n], vals[2 * n:], sum(vals) // n)


@pytest.mark.parametrize("use_min", [False, True])
def test_n3dm_random(use_min):
    rng = random.Random(11)
    for _ in range(60):
        inst = _random_balanced(rng, rng.randint(1, 3), 6)
        m = min_reduction_m(inst) if use_min else None
        expect = oracles.matching_exists(inst.x, inst.y, inst.z, inst.b)
        assert (solve_gpp(n3dm_to_gpp(inst, m)) is not None) == expect, inst


def test_density_of_found_systems():
    for moduli in [(2, 4, 4), (3, 3, 3), (2, 6, 6, 6), (4, 4, 4, 4)]:
        r = find_dcs(moduli)
        assert CoveringSystem.of(moduli, r).density() == F(1)
