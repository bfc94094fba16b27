import pytest

from app.core.configurations import Island, island_of
from app.core.exceptions import RangeError, ReducibilityError
from app.core.graph import Graph
from app.core.reducibility import (
    C_REDUCIBLE,
    D_REDUCIBLE,
    MAX_RING,
    check_island_reducibility,
    check_reducibility,
    delete_and_suppress_island,
    expand_classes,
    is_bridgeless_with_ring,
    is_valid_contraction,
    maximal_consistent_residual,
    residual_by_definition,
)
from app.core.ring_colorings import KEMPE_MAX_R, PLANAR
from conftest import load_conf


def cycle_island(n):
    edges = {i: (i, (i + 1) % n) for i in range(n)}
    return Island(Graph(edges), tuple(range(n)), f'C{n}').ringed()


def test_expand_classes():
    assert expand_classes([(0, 0)]) == {(0, 0), (1, 1), (2, 2)}
    assert len(expand_classes([(0, 1, 2)])) == 6


def test_triangle_island_is_d_reducible():
    verdict = check_island_reducibility(cycle_island(3))
    assert verdict.kind == D_REDUCIBLE
    assert verdict.contraction == ()
    assert verdict.levels_used == 0


def test_square_needs_one_kempe_level():
    colorable = maximal_consistent_residual(cycle_island(4))
    assert colorable.residual == frozenset()
    assert len(colorable.levels) == 2
    assert colorable.levels[1] == frozenset({(0, 1, 0, 1)})
    assert colorable.level_of((2, 0, 2, 0)) == 1
    assert check_island_reducibility(cycle_island(4)).kind == D_REDUCIBLE


def test_ring_limit_follows_kempe_tables():
    assert MAX_RING == 2 * KEMPE_MAX_R == 18
    with pytest.raises(ReducibilityError):
        maximal_consistent_residual(cycle_island(MAX_RING + 1))


def test_pentagon_is_not_d_reducible():
    ringed = cycle_island(5)
    colorable = maximal_consistent_residual(ringed, PLANAR)
    assert colorable.residual
    assert expand_classes(colorable.residual) == residual_by_definition(ringed, PLANAR)


def test_ring_edges_cannot_be_contracted():
    ringed = cycle_island(4)
    with pytest.raises(ReducibilityError):
        delete_and_suppress_island(ringed, [ringed.terminals[0]])


def test_ringed_cycle_is_bridgeless():
    assert is_bridgeless_with_ring(cycle_island(5))


@pytest.mark.parametrize('cap', [-1, 9])
def test_contraction_cap_range(cap):
    with pytest.raises(RangeError):
        check_island_reducibility(cycle_island(3), max_contraction=cap)


def test_verdict_record():
    record = check_island_reducibility(cycle_island(4)).to_record()
    assert record['kind'] == D_REDUCIBLE
    assert record['ring_size'] == 4
    assert 'contraction_edges' not in record


@pytest.mark.slow
def test_conf1_contraction_edges_are_valid():
    conf = load_conf('conf1.conf')
    island = island_of(conf)
    ringed = island.ringed()
    colorable = maximal_consistent_residual(ringed, PLANAR)
    assert colorable.residual
    assert is_valid_contraction(ringed, island.contraction_edges(conf.contract), colorable)


@pytest.mark.slow
def test_conf1_is_c_reducible():
    verdict = check_reducibility(load_conf('conf1.conf'), PLANAR, max_contraction=6)
    assert verdict.kind == C_REDUCIBLE
    assert len(verdict.completion_edges) == len(verdict.contraction)
