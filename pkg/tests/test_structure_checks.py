import networkx as nx
import pytest

from app.core.configurations import Configuration, free_completion
from app.core.exceptions import RangeError, ReducibilityError
from app.core.structure_checks import (
    COMP67_PATTERNS,
    INTENDED,
    LITERAL,
    LOOSE,
    NO_CONTRACTION,
    as_view,
    check_configuration_safety,
    check_dist5,
    check_dist5_contractible,
    check_dist5_non_contractible,
    comp67cut_cases,
    contract_edges,
    counting_function,
    cycle_contradicts,
    forbidden_cycle,
    forbidden_cycle_one_edge,
    get_low_cut_reducable,
    reducable_vertices,
    strip_separated,
)
from conftest import load_conf


@pytest.fixture
def triangle_view():
    return as_view(load_conf('triangle.conf'))


@pytest.mark.parametrize('l, x, cutsize, expected', [
    (4, 0, 6, False),
    (4, 1, 6, True),
    (5, 1, 6, False),
    (5, 2, 6, True),
    (6, 3, 6, False),
    (6, 4, 6, True),
    (7, 5, 6, False),
    (7, 4, 7, False),
    (7, 5, 7, True),
    (8, 10, 7, False),
])
def test_cycle_contradicts(l, x, cutsize, expected):
    assert cycle_contradicts(l, x, cutsize) is expected


def test_contract_edges():
    g = nx.path_graph(4)
    h, image = contract_edges(g, [(1, 2), (0, 3)])
    assert sorted(h.nodes) == [0, 1, 3]
    assert sorted(h.edges) == [(0, 1), (1, 3)]
    assert image[2] == 1


def test_counting_functions():
    assert [counting_function(LOOSE)(n) for n in range(4)] == [0, 1, 2, 3]
    assert [counting_function(LITERAL)(n) for n in range(4)] == [1, 1, 1, 1]
    assert [counting_function(INTENDED)(n) for n in range(4)] == [0, 0, 1, 1]
    with pytest.raises(RangeError):
        counting_function('strict')


@pytest.mark.parametrize('sizes, l, expected', [
    ((2, 5), 5, set()),
    ((2, 5), 8, {'a', 'b'}),
    ((2, 5), 6, {'a'}),
    ((2, 3), 6, {'a', 'b'}),
    ((4, 5), 6, set()),
    ((5, 4), 7, {'b'}),
    ((5, 6), 7, set()),
])
def test_low_cut_table(sizes, l, expected):
    c1 = {f'a{i}' for i in range(sizes[0])}
    c2 = {f'b{i}' for i in range(sizes[1])}
    out = get_low_cut_reducable(c1, c2, l)
    assert {v[0] for v in out} == expected


@pytest.mark.parametrize('l', [4, 9])
def test_low_cut_length_range(l):
    with pytest.raises(RangeError):
        get_low_cut_reducable({1}, {2}, l)


def test_strip_separated():
    g = nx.complete_graph(4)
    g.add_edge(0, 4)
    core = strip_separated(g, {0, 1, 2, 3})
    assert sorted(core.nodes) == [0, 1, 2, 3]


def test_view_ring_geometry(triangle_view):
    view = triangle_view
    assert view.ring == (3, 4, 5, 6, 7, 8)
    assert view.ring_path(3, 5) == [3, 4, 5]
    assert view.ring_path(3, 5, clockwise=False) == [3, 8, 7, 6, 5]
    assert view.same_arc(3, 6, 4, 5)
    assert not view.same_arc(3, 6, 4, 7)
    assert view.ring_neighbors(0) == [3, 4, 5]
    assert view.k_neighbors(0) == [1, 2]
    assert view.distance(0, 1) == 1
    with pytest.raises(RangeError):
        view.ring_path(0, 3)


def test_disk_count(triangle_view):
    # 两个环顶点、一个内部顶点，k = 3
    assert triangle_view.disk_count({3, 4, 0}, 3) == 1
    assert triangle_view.disk_count({3, 4, 5, 6}, 1) == 2


def test_forbidden_cycle_ring_length(triangle_view):
    assert forbidden_cycle(triangle_view, 3, 5, 3, 6)
    assert not forbidden_cycle(triangle_view, 3, 5, 2, 6)


@pytest.mark.parametrize('k, cutsize, u, v', [(0, 6, 3, 5), (2, 5, 3, 5), (2, 6, 3, 3)])
def test_forbidden_cycle_arguments(triangle_view, k, cutsize, u, v):
    with pytest.raises(RangeError):
        forbidden_cycle(triangle_view, u, v, k, cutsize)
    with pytest.raises(RangeError):
        forbidden_cycle_one_edge(triangle_view, u, v, k, cutsize)


def test_bad_contraction_edge():
    conf = load_conf('triangle.conf')
    bad = Configuration(conf.gamma, conf.rotation, [(0, 7)], 'bad')
    with pytest.raises(ReducibilityError):
        as_view(free_completion(bad))


def test_as_view_rejects_other_objects():
    with pytest.raises(TypeError):
        as_view('triangle.conf')


def test_dist5_on_strip():
    result = check_dist5(load_conf('strip.conf'))
    # (0, 9)、(0, 10)、(1, 10) 三对，各自的环邻点组合
    assert result.evaluated == 21
    # 三角带首尾相接后偶数顶点围住一个六度点，可收缩的相邻确实存在
    assert result.possible
    assert any(case.u == 0 and case.v == 10 and case.contractible for case in result.cases)
    assert not any(case.non_contractible for case in result.cases)
    record = result.to_record()
    assert record['counting'] == LOOSE
    assert record['uv_possible'] is True


@pytest.mark.parametrize('counting', [LOOSE, LITERAL, INTENDED])
def test_dist5_on_hexagon_is_impossible(counting):
    result = check_dist5(load_conf('hexagon.conf'), counting)
    # 12 对角点-边点（2×1）与 18 对边点-边点（1×1）
    assert result.evaluated == 42
    assert not result.possible
    assert result.cases == []
    assert result.to_record()['uv_possible'] is False


def test_dist5_single_ring_neighbor_forces_both_in_k():
    view = as_view(load_conf('hexagon.conf'))
    # 角点 0 与边点 14 的距离为 5；14 只有一个环邻点
    assert nx.shortest_path_length(view.conf.graph, 0, 14) == 5
    (nb_v,) = view.ring_neighbors(14)
    for nb_u in view.ring_neighbors(0):
        assert not check_dist5_contractible(view, 0, 14, nb_u, nb_v)
        assert not check_dist5_non_contractible(view, 0, 14, nb_u, nb_v)


def test_dist5_counting_mode_checked():
    with pytest.raises(RangeError):
        check_dist5(load_conf('strip.conf'), counting='strict')


def test_comp67_patterns(triangle_view):
    with pytest.raises(RangeError):
        comp67cut_cases(triangle_view, '8cut-1')
    assert set(COMP67_PATTERNS) == {'6cut-1', '6cut-2', '7cut-1', '7cut-2', '7cut-3', '7cut-4'}


def test_comp67_cases_use_ring_vertices():
    view = as_view(load_conf('conf1.conf'))
    for case in comp67cut_cases(view, '6cut-2'):
        assert set(case.assignment.values()) <= set(view.ring)


def test_safety_without_contraction():
    report = check_configuration_safety(load_conf('triangle.conf'))
    assert report.witness == NO_CONTRACTION
    assert not report.k6_risk
    assert report.order == 9
    assert report.consistent()
    with pytest.raises(ReducibilityError):
        reducable_vertices(load_conf('triangle.conf'))


def test_safety_report_is_consistent():
    report = check_configuration_safety(load_conf('conf1.conf'))
    # 收缩后只剩两个孤立的环像
    assert report.k6_risk
    assert report.order == 2
    assert report.degrees == (0, 0)
    assert report.witness is None
    assert report.consistent()
    record = report.to_record()
    assert set(record) == {'id', 'loop_risk', 'k6_risk', 'surviving_core', 'witness', 'reasons'}
    assert record['surviving_core']['order'] == report.order
