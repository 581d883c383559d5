from fractions import Fraction as F

import pytest

from patrol.circle import runners_strategy
from patrol.covering import N3DMInstance, TriangleFreeGraph
from patrol.fence import build_43_schedule, partition_strategy
from patrol.io import (
    ParseError,
    ck_sequence_text,
    circle_schedule_text,
    fence_schedule_text,
    fence_svg,
    graph_text,
    n3dm_text,
    parse_ck_sequence,
    parse_circle_schedule,
    parse_fence_schedule,
    parse_graph,
    parse_n3dm,
    parse_point_instances,
    parse_visit_schedule,
    point_instance_text,
)
from patrol.point import PeriodicVisitSchedule, PointInstance

from .test_circle import three_sets


def test_fence_round_trip():
    for s in (build_43_schedule(2, 3), partition_strategy((2, 1, F(1, 3)))):
        assert parse_fence_schedule(fence_schedule_text(s)) == s


def test_circle_round_trip():
    _, s = runners_strategy((2, 1, 1))
    assert parse_circle_schedule(circle_schedule_text(s)) == s


def test_sequence_round_trip():
    seq = three_sets()
    assert parse_ck_sequence(ck_sequence_text(seq)) == seq


def test_point_formats():
    insts = parse_point_instances("point: 2 3 5\n# note\npoint: 4 4\n")
    assert [i.intervals for i in insts] == [(2, 3, 5), (4, 4)]
    assert parse_point_instances(point_instance_text(PointInstance((2, 2))))[0].intervals == (2, 2)
    assert parse_visit_schedule("period=4: 0 1 0 2") == PeriodicVisitSchedule((0, 1, 0, 2))


def test_graph_and_n3dm_round_trip():
    g = TriangleFreeGraph(4, ((0, 1), (1, 2), (2, 3)))
    assert parse_graph(graph_text(g)) == g
    inst = N3DMInstance((1, 2), (0, 3), (2, 1), 4)
    assert parse_n3dm(n3dm_text(inst)) == inst


def test_comments_and_spacing():
    text = "fence 1/2 1 1 1   # header\n\nv= 1 period=1 0,0 1/2,1/2\n"
    s = parse_fence_schedule(text)
    assert s.length == F(1, 2) and len(s.agents) == 1


def test_decimals_need_bound():
    text = "fence 0.5 1 1 1\nv=1 period=1 0,0 0.5,0.5\n"
    with pytest.raises(ParseError):
        parse_fence_schedule(text)
    assert parse_fence_schedule(text, max_den=10).length == F(1, 2)


@pytest.mark.parametrize("text, line, col", [
    ("fence 1 1 1 1\nv=1 period=1 0,0 1/2,x\n", 2, 18),
    ("fence 1 1 1\n", 1, 1),
    ("point: 2 -3\n", 1, 10),
])
def test_parse_error_positions(text, line, col):
    parser = parse_point_instances if text.startswith("point") else parse_fence_schedule
    with pytest.raises(ParseError) as e:
        parser(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_agent_count_mismatch():
    with pytest.raises(ParseError):
        parse_fence_schedule("fence 1 1 1 2\nv=1 period=1 0,0 1/2,1/2\n")


def test_graph_errors():
    with pytest.raises(ParseError):
        parse_graph("3 2\n0 1\n")
    with pytest.raises(ParseError):
        parse_graph("3 3\n0 1\n1 2\n0 2\n")
    with pytest.raises(ParseError):
        parse_n3dm('{"x": [1], "y": [1]}')


def test_svg_is_wellformed():
    import xml.etree.ElementTree as ET

    root = ET.fromstring(fence_svg(build_43_schedule(2, 2)))
    assert root.tag.endswith("svg")
