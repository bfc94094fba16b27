import networkx as nx
import pandas as pd
import pytest

from app.core.configurations import Island
from app.core.exceptions import RangeError
from app.core.graph import euler_characteristic
from app.core.island_families import (
    FamilyMember,
    abstract_classes,
    dihedral_key,
    family_report,
    gamma_patterns,
    generate_family,
    generate_pi,
    generate_pi13_star,
    generate_v2y,
    pi_patterns,
    ringed_classes,
    satisfies_pi,
    satisfies_pi13_star,
    subdivide_cycle,
    summarize,
)


def test_v2y_is_moebius_ladder():
    g = generate_v2y(3)
    assert g.order == 6
    assert g.is_cubic()
    h = nx.Graph(g.to_networkx())
    assert nx.is_isomorphic(h, nx.complete_bipartite_graph(3, 3))
    assert sum(1 for s in g.edge_signs.values() if s == -1) == 3


def test_y_lower_bound():
    with pytest.raises(RangeError):
        generate_v2y(2)
    with pytest.raises(RangeError):
        subdivide_cycle(3, (1, 1, 1))


def test_dihedral_key():
    assert dihedral_key((1, 0, 0, 0, 0, 0)) == (0, 0, 0, 0, 0, 1)
    assert dihedral_key((0, 2, 1, 0, 0, 0)) == dihedral_key((0, 0, 0, 1, 2, 0))


@pytest.mark.parametrize('k, count', [(0, 1), (1, 1), (2, 4)])
def test_gamma_pattern_counts(k, count):
    assert len(gamma_patterns(3, k)) == count


def test_pi_condition():
    assert satisfies_pi((1, 1, 1, 1, 1, 1), 3)
    # 相邻两条圈边都未细分
    assert not satisfies_pi((0, 0, 1, 1, 2, 2), 3)
    # 对边都未细分
    assert not satisfies_pi((0, 2, 1, 0, 2, 1), 3)


def test_pi_3_6_has_fourteen_members():
    assert len(pi_patterns(3, 6)) == 14
    members = generate_pi(3, 6)
    assert len(members) == 14
    assert all(m.is_island() for m in members)
    assert all(m.island.ring_size == 6 for m in members)
    assert members[0].name == 'pi-0'


def test_subdivided_island_shape():
    island = subdivide_cycle(3, (1, 1, 1, 1, 1, 1))
    island.validate()
    assert island.graph.order == 12
    assert island.ring_size == 6
    assert all(island.graph.degree(v) == 2 for v in island.boundary)


def test_unknown_family():
    with pytest.raises(RangeError):
        generate_family('hexagon')


def test_summarize():
    frame = pd.DataFrame({
        'id': ['a', 'b', 'c', 'd'],
        'verdict': ['D', 'C', 'C', 'non-reducible'],
        'contraction_size': pd.array([0, 2, 2, None], dtype='Int64'),
    })
    assert summarize(frame) == {'D': 1, 'C': {2: 2}, 'non-reducible': 1}


@pytest.mark.slow
def test_pi_3_6_all_reducible():
    frame = family_report(generate_pi(3, 6))
    assert len(frame) == 14
    summary = summarize(frame)
    assert summary['non-reducible'] == 0
    assert summary['D'] + sum(summary['C'].values()) == 14
    assert all(size <= 2 for size in summary['C'])




@pytest.mark.slow
@pytest.mark.parametrize('y, k, expected', [
    (4, 6, (2, 0, 0)),
    (4, 7, (8, 0, 0)),
    (4, 8, (29, 1, 0)),
    (5, 8, (2, 0, 0)),
])
def test_pi_family_rows(y, k, expected):
    summary = summarize(family_report(generate_pi(y, k)))
    assert (summary['D'], sum(summary['C'].values()), summary['non-reducible']) == expected


def test_ringed_classes_ignore_rotation_and_reflection():
    island = subdivide_cycle(3, (1, 1, 1, 1, 1, 1))
    ring = island.boundary
    members = [
        FamilyMember('pi', 0, island),
        FamilyMember('pi', 1, Island(island.graph, ring[2:] + ring[:2])),
        FamilyMember('pi', 2, Island(island.graph, tuple(reversed(ring)))),
    ]
    assert ringed_classes(members) == members[:1]


@pytest.mark.slow
def test_delta6_members_and_contraction_sizes():
    members = generate_family('delta6', 3, 6)
    assert all(m.is_island() for m in members)
    assert all(m.island.ring_size == 6 for m in members)
    assert all(m.island.graph.order == 14 for m in members)
    # 环序不同但抽象同构的岛各自保留
    assert len(abstract_classes(members)) < len(members)
    summary = summarize(family_report(members))
    assert summary['C'].get(4) == 2
    assert summary['non-reducible'] == 0


@pytest.mark.slow
def test_pi_hat_3_6_is_projective():
    members = generate_family('pihat36')
    assert members
    for m in members:
        assert m.is_island()
        assert m.island.ring_size == 6
        assert euler_characteristic(m.island.graph) == 1


@pytest.mark.slow
def test_pi13_star_membership():
    members = generate_pi13_star()
    assert members
    allowed = set(pi_patterns(5, 13))
    for m in members:
        assert m.pattern in allowed
        assert sum(m.pattern) == 13
        assert satisfies_pi13_star(m.pattern)
    assert not satisfies_pi13_star((0, 0, 2, 2, 2, 2, 2, 1, 1, 1))
