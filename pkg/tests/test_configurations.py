import pytest

from app.core.configurations import (
    appears_in,
    format_configuration,
    free_completion,
    island_of,
    parse_configuration,
)
from app.core.exceptions import CompletionError, ConfigurationError
from conftest import load_conf, load_graph


@pytest.mark.parametrize('name, ring', [
    ('single.conf', 4),
    ('triangle.conf', 6),
    ('conf1.conf', 6),
    ('bowtie.conf', 8),
    ('strip.conf', 6),
    ('hexagon.conf', 6),
])
def test_ring_size(name, ring):
    assert load_conf(name).ring_size == ring


def test_bowtie_cut_vertex():
    conf = load_conf('bowtie.conf')
    assert conf.cut_vertices == frozenset({0})
    assert conf.boundary_walk().count(0) == 2


def test_triangle_faces():
    conf = load_conf('triangle.conf')
    assert conf.triangles() == [(0, 1, 2)]
    assert conf.boundary == [0, 1, 2]


@pytest.mark.parametrize('text, clause', [
    ('conf 1 3\n0 4 0\n', 'gamma-min'),
    ('conf 1 5\n0 5 0\n', 'ring-size'),
    ('conf 2 0\n0 5 1 1\n1 5 0\n', 'symmetry'),
    ('conf 1 4\n0 5 2 1\n', 'format'),
    ('', 'format'),
    ('conf 2 4\n0 5 0\n', 'format'),
])
def test_invalid_configurations(text, clause):
    with pytest.raises(ConfigurationError) as info:
        parse_configuration(text)
    assert info.value.clause == clause


def test_contract_line():
    conf = load_conf('conf1.conf')
    assert conf.contract == ((0, 4), (0, 3), (3, 6), (2, 9), (1, 2), (1, 7))


def test_format_configuration_keeps_contract():
    conf = load_conf('conf1.conf')
    again = parse_configuration(format_configuration(conf), 'again')
    assert again.rotation == conf.rotation
    assert again.gamma == conf.gamma
    assert again.contract == conf.contract


def test_triangle_completion():
    completion = free_completion(load_conf('triangle.conf'))
    assert completion.ring == (3, 4, 5, 6, 7, 8)
    assert completion.inner == [0, 1, 2]
    assert completion.graph.number_of_edges() == 18
    assert len(completion.triangles) == 10
    assert all(completion.graph.degree(v) == 5 for v in completion.inner)
    assert len(completion.ring_edges) == 6


def test_conf1_completion():
    completion = free_completion(load_conf('conf1.conf'))
    assert completion.ring == (4, 5, 6, 7, 8, 9)
    assert completion.graph.number_of_edges() == 21
    assert len(completion.triangles) == 12
    for u, v in completion.configuration.contract:
        assert completion.graph.has_edge(u, v)


def test_single_vertex_has_no_completion():
    with pytest.raises(CompletionError):
        free_completion(load_conf('single.conf'))


def test_island_of_triangle():
    island = island_of(load_conf('triangle.conf'))
    assert island.graph.order == 10
    assert island.graph.size == 12
    assert island.ring_size == 6
    ringed = island.ringed()
    assert ringed.ring_size == 6
    assert ringed.graph.is_cubic() is False
    assert all(ringed.graph.degree(v) in (1, 3) for v in ringed.graph.vertices)


def test_island_contraction_edges():
    conf = load_conf('conf1.conf')
    island = island_of(conf)
    edges = island.contraction_edges(conf.contract)
    assert len(edges) == 6
    assert all(island.crossing[e] in conf.contract for e in edges)
    with pytest.raises(ConfigurationError):
        island.contraction_edges([(4, 5)])


def test_single_vertex_occurs_at_every_degree_five_vertex():
    t = load_graph('icosahedron.cub')
    assert len(appears_in(load_conf('single.conf'), t)) == 12
    six = parse_configuration('conf 1 5\n0 6 0\n', 'six')
    assert appears_in(six, t) == []


def test_cut_vertex_configuration_skipped():
    assert appears_in(load_conf('bowtie.conf'), load_graph('icosahedron.cub')) == []
