import random

import pytest

from app.core.cut_analysis import (
    ColoringGraph,
    analyze_cuts,
    build_4cut_variants,
    build_5cut_gadget,
    build_gy_variants,
    four_cut_sweep,
    is_planar,
    lemma_sweep,
    overlap,
    side_classes,
    verify_LX_lemmas,
)
from app.core.exceptions import CutError
from app.core.graph import Graph, is_isomorphic, petersen_graph, three_edge_color
from conftest import load_graph


def cycle(n):
    return Graph({i: (min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)})


def test_pentagram_on_pentagon_is_petersen():
    g = build_5cut_gadget(cycle(5), range(5), 'pentagram')
    assert is_isomorphic(g, petersen_graph())


def test_pentagon_gadget_is_colorable_prism():
    g = build_5cut_gadget(cycle(5), range(5), 'pentagon')
    assert g.order == 10
    assert g.is_cubic()
    assert is_planar(g)
    assert three_edge_color(g) is not None


@pytest.mark.parametrize('gadget, extra', [('tripod', 1), ('butterfly', 3)])
def test_small_gadgets(gadget, extra):
    g = build_5cut_gadget(cycle(5), range(5), gadget)
    assert g.order == 5 + extra
    assert g.is_cubic()


def test_gadget_errors():
    with pytest.raises(CutError):
        build_5cut_gadget(cycle(5), range(5), 'hexagram')
    with pytest.raises(CutError):
        build_5cut_gadget(cycle(5), range(5), 'tripod', triple=(0, 0, 1))
    with pytest.raises(CutError):
        build_5cut_gadget(cycle(4), range(4), 'pentagon')


def test_four_cut_variants():
    variants = build_4cut_variants(cycle(4), (0, 1, 2, 3))
    assert sorted(variants) == ['X1', 'X2', 'X3', 'X4', 'X5', 'X6']
    assert all(g.is_cubic() for g in variants.values())
    assert variants['X1'].order == 4
    assert variants['X4'].order == 6
    gy = build_gy_variants(cycle(4), (0, 1, 2, 3))
    assert is_isomorphic(gy['G2'], variants['X6'])
    with pytest.raises(CutError):
        build_4cut_variants(cycle(6), (0, 1, 3, 4, 5))


def test_side_classes_of_square():
    # 四边形一侧只缺交错的那一类
    classes = side_classes(cycle(4), (0, 1, 2, 3))
    assert classes == frozenset({(0, 0, 0, 0), (0, 0, 1, 1), (0, 1, 1, 0)})
    with pytest.raises(CutError):
        side_classes(cycle(4), (0, 0, 1, 2))


def test_pentagon_side_coloring_graph_lemmas():
    classes = side_classes(cycle(5), range(5))
    assert classes
    L = ColoringGraph(tuple(range(5)), frozenset())
    names = {r.name: r.holds for r in verify_LX_lemmas(L)}
    assert names['no-degree-1']
    assert not names['pentagon']
    assert not names['nonempty']


def test_sweeps_hold():
    assert all(all(row.values()) for row in four_cut_sweep(10, random.Random(7)))
    for row in lemma_sweep(10, random.Random(7)):
        for name in ('no-degree-1', 'triangle', 'pentagon', 'butterfly'):
            assert row[name]


def test_petersen_cut_sides_never_overlap(petersen):
    reports = analyze_cuts(petersen, 5)
    assert reports
    for report in reports:
        assert not report.colorable
        assert overlap(report.lx, report.ly) == frozenset()
        record = report.to_record()
        assert record['overlap'] == []
        assert set(record['lemmas']) >= {'triangle', 'pentagon'}


def test_cube_four_cuts():
    reports = analyze_cuts(load_graph('cube.cub'), 4)
    assert reports
    for report in reports:
        assert report.colorable
        assert len(report.classes_a) == 3
        assert len(report.classes_b) == 3
        assert report.lx is None


def test_analyze_rejects_other_sizes(petersen):
    with pytest.raises(CutError):
        analyze_cuts(petersen, 6)
