import random

import pytest

from app.core.cuts import (
    color_pipeline,
    cyclic_edge_connectivity,
    enumerate_cyclic_cuts,
    find_bridges,
    is_petersen_like,
    petersen_like_confluence,
    replay_trace,
)
from app.core.exceptions import BridgeError
from app.core.graph import is_isomorphic, is_proper_coloring, parse_graph, petersen_graph
from conftest import load_graph

BRIDGED = """
cubic 10
0: 4 2 3
1: 4 2 3
2: 0 1 3
3: 0 1 2
4: 0 1 9
5: 9 7 8
6: 9 7 8
7: 5 6 8
8: 5 6 7
9: 5 6 4
"""


@pytest.mark.parametrize('name, value', [
    ('petersen.cub', 5),
    ('cube.cub', 4),
    ('prism.cub', 3),
    ('theta_chain.cub', 2),
])
def test_cyclic_edge_connectivity(name, value):
    conn = cyclic_edge_connectivity(load_graph(name))
    assert conn.defined
    assert conn.value == value
    assert conn.witness.size == value


def test_petersen_witness_isolates_pentagon(petersen):
    witness = cyclic_edge_connectivity(petersen).witness
    assert len(witness.side_a) == 5
    assert len(witness.side_b) == 5


def test_k4_has_no_cyclic_cut(k4):
    conn = cyclic_edge_connectivity(k4)
    assert not conn.defined
    assert conn.witness is None
    assert enumerate_cyclic_cuts(k4, 5) == []


def test_theta_chain_two_cut():
    g = load_graph('theta_chain.cub')
    two = [c for c in enumerate_cyclic_cuts(g, 3) if c.size == 2]
    assert len(two) == 1
    assert {two[0].side_a, two[0].side_b} == {frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7})}
    record = two[0].to_record()
    assert sorted(record) == ['edges', 'side_a', 'side_b']


def test_cut_edges_join_the_two_sides(petersen):
    for cut in enumerate_cyclic_cuts(petersen, 5):
        assert cut.side_a | cut.side_b == frozenset(petersen.vertices)
        for e in cut.edges:
            u, v = petersen.edges[e]
            assert (u in cut.side_a) != (v in cut.side_a)


def test_find_bridges():
    assert find_bridges(load_graph('petersen.cub')) == []
    assert len(find_bridges(parse_graph(BRIDGED))) == 1


def test_bridge_rejected():
    g = parse_graph(BRIDGED)
    with pytest.raises(BridgeError):
        color_pipeline(g)
    with pytest.raises(BridgeError):
        is_petersen_like(g)


@pytest.mark.parametrize('name, expected', [
    ('petersen.cub', True),
    ('petersen_triangle.cub', True),
    ('cube.cub', False),
    ('prism.cub', False),
    ('k4.cub', False),
])
def test_is_petersen_like(name, expected):
    assert is_petersen_like(load_graph(name)).verdict is expected


def test_trace_replays_to_petersen():
    g = load_graph('petersen_triangle.cub')
    result = is_petersen_like(g)
    assert len(result.trace.steps) >= 1
    assert is_isomorphic(replay_trace(g, result.trace), petersen_graph())


@pytest.mark.parametrize('seed', [0, 1, 2, 3])
def test_random_reduction_order_agrees(seed):
    g = load_graph('petersen_triangle.cub')
    assert is_petersen_like(g, random.Random(seed)).verdict


def test_confluence_across_seeds(petersen, prism):
    verdicts = petersen_like_confluence(load_graph('petersen_triangle.cub'), range(3))
    assert verdicts == {None: True, 0: True, 1: True, 2: True}
    assert petersen_like_confluence(petersen, [5]) == {None: True, 5: True}
    assert not any(petersen_like_confluence(prism, [0, 1]).values())


def test_pipeline_petersen_obstruction(petersen):
    result = color_pipeline(petersen)
    assert not result.colorable
    assert is_isomorphic(result.obstruction, petersen_graph())


def test_pipeline_petersen_triangle_obstruction():
    result = color_pipeline(load_graph('petersen_triangle.cub'))
    assert not result.colorable
    assert is_isomorphic(result.obstruction, petersen_graph())
    assert result.trace


@pytest.mark.parametrize('name', ['prism.cub', 'cube.cub', 'theta_chain.cub', 'k4.cub'])
def test_pipeline_colors(name):
    g = load_graph(name)
    result = color_pipeline(g)
    assert result.colorable
    assert result.obstruction is None
    assert is_proper_coloring(g, result.coloring)
