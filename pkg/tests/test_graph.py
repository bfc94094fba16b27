import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import DegreeError, GraphFormatError, NotCubicError
from app.core.graph import (
    CubicGraph,
    delete_and_suppress,
    dual_triangulation,
    euler_characteristic,
    faces,
    format_graph,
    is_isomorphic,
    is_proper_coloring,
    iter_edge_colorings,
    kempe_chain,
    kempe_swap,
    parse_graph,
    petersen_graph,
    three_edge_color,
)
from conftest import load_graph


def test_petersen_fixture_matches_builder(petersen):
    assert petersen.order == 10
    assert petersen.size == 15
    assert petersen.is_cubic()
    assert is_isomorphic(petersen, petersen_graph())


def test_petersen_projective_faces():
    g = petersen_graph()
    fs = faces(g)
    assert len(fs) == 6
    assert all(len(face) == 5 for face in fs)
    assert euler_characteristic(g) == 1


@pytest.mark.parametrize('name, chi', [('cube.cub', 2), ('k4.cub', 2), ('prism.cub', 2)])
def test_planar_fixtures_euler_characteristic(name, chi):
    assert euler_characteristic(load_graph(name)) == chi


def test_petersen_not_colorable(petersen):
    assert three_edge_color(petersen) is None
    assert next(iter_edge_colorings(petersen), None) is None


@pytest.mark.parametrize('name', ['cube.cub', 'k4.cub', 'prism.cub', 'theta_chain.cub'])
def test_colorable_fixtures(name):
    g = load_graph(name)
    coloring = three_edge_color(g)
    assert coloring is not None
    assert is_proper_coloring(g, coloring)


def test_coloring_counts(k4, prism):
    # K4 与三棱柱都只有一种完美匹配分解
    assert len(list(iter_edge_colorings(k4))) == 6
    assert len(list(iter_edge_colorings(prism))) == 6


def test_fixed_colors_restrict_enumeration(k4):
    fixed = {e: c for e, c in zip(k4.incidence[0], (0, 1, 2))}
    colorings = list(iter_edge_colorings(k4, fixed))
    assert len(colorings) == 1
    assert all(colorings[0][e] == c for e, c in fixed.items())


def test_three_edge_color_needs_cubic():
    g = parse_graph(load_text_icosahedron())
    with pytest.raises(NotCubicError):
        three_edge_color(g)


def load_text_icosahedron():
    from conftest import data_path
    with open(data_path('graphs', 'icosahedron.cub'), 'r', encoding='utf-8') as f:
        return f.read()


def test_kempe_chain_in_k4_is_four_cycle(k4):
    coloring = three_edge_color(k4)
    e = k4.incidence[0][0]
    other = (coloring[e] + 1) % 3
    chain = kempe_chain(k4, coloring, (coloring[e], other), e)
    assert chain.is_cycle
    assert len(chain.edges) == 4
    swapped = kempe_swap(k4, coloring, chain)
    assert is_proper_coloring(k4, swapped)
    assert swapped[e] == other


def test_delete_and_suppress_k4_edge(k4):
    reduced = delete_and_suppress(k4, [0])
    assert reduced.order == 2
    assert reduced.size == 3
    assert all(reduced.degree(v) == 3 for v in reduced.vertices)


@pytest.mark.parametrize('text, error', [
    ('', GraphFormatError),
    ('cubic 2\n0: 1\n', GraphFormatError),
    ('cubic 2\n0: 1\n1:\n', GraphFormatError),
    ('cubic 1\n0: 0\n', GraphFormatError),
    ('cubic 5\n0: 1 2 3 4\n1: 0\n2: 0\n3: 0\n4: 0\n', DegreeError),
    ('triangle 3\n', GraphFormatError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_graph(text)


def test_format_graph_keeps_embedding(petersen):
    again = parse_graph(format_graph(petersen))
    assert isinstance(again, CubicGraph)
    assert is_isomorphic(again, petersen)
    assert euler_characteristic(again) == 1


def test_dual_of_petersen_is_k6():
    dual = dual_triangulation(petersen_graph())
    assert dual.order == 6
    assert dual.size == 15
    assert nx.is_isomorphic(nx.Graph(dual.to_networkx()), nx.complete_graph(6))
    assert all(len(face) == 3 for face in faces(dual))


def test_dual_of_cube_is_octahedron():
    dual = dual_triangulation(load_graph('cube.cub'))
    assert dual.order == 6
    assert all(dual.degree(v) == 4 for v in dual.vertices)
    assert euler_characteristic(dual) == 2


def test_petersen_triangle_not_isomorphic_to_petersen(petersen):
    assert not is_isomorphic(load_graph('petersen_triangle.cub'), petersen)


@settings(max_examples=25, deadline=None)
@given(n=st.sampled_from([4, 6, 8, 10, 12]), seed=st.integers(0, 10_000))
def test_coloring_is_proper_or_absent(n, seed):
    h = nx.random_regular_graph(3, n, seed=seed)
    g = CubicGraph({i: (min(u, v), max(u, v)) for i, (u, v) in enumerate(sorted(h.edges))})
    coloring = three_edge_color(g)
    if coloring is None:
        assert next(iter_edge_colorings(g), None) is None
    else:
        assert is_proper_coloring(g, coloring)
