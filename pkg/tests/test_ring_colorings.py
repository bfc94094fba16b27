import os
from itertools import product

import pytest

from app.core.exceptions import ColoringError, RangeError
from app.core.ring_colorings import (
    PLANAR,
    PROJECTIVE,
    SignedMatch,
    canonical_coloring,
    coloring_classes,
    fit_neighbors,
    get_kempe,
    is_planar_matching,
    is_projective_matching,
    parity_colorings,
    satisfies_parity,
    theta_fit,
)


@pytest.mark.parametrize('k, count, classes', [(2, 3, 1), (4, 21, 4), (5, 60, 10)])
def test_parity_counts(k, count, classes):
    colorings = parity_colorings(k)
    assert len(colorings) == count
    assert len(coloring_classes(k)) == classes
    direct = [c for c in product(range(3), repeat=k) if satisfies_parity(c)]
    assert colorings == sorted(direct)


def test_parity_rejects_short_ring():
    with pytest.raises(RangeError):
        parity_colorings(1)


def test_canonical_coloring():
    assert canonical_coloring((2, 2, 1, 0)) == (0, 0, 1, 2)
    assert canonical_coloring((1, 0, 1, 0)) == canonical_coloring((2, 1, 2, 1))


@pytest.mark.parametrize('r, size', [(0, 1), (1, 1), (2, 2), (3, 5), (4, 14), (5, 42), (6, 132)])
def test_planar_table_is_catalan(r, size):
    table = get_kempe(r, PLANAR)
    assert len(table) == size
    assert all(is_planar_matching(m) for m in table.matchings)


@pytest.mark.parametrize('r', [1, 2, 3, 4])
def test_projective_table_contains_planar(r):
    planar = set(get_kempe(r, PLANAR).matchings)
    projective = set(get_kempe(r, PROJECTIVE).matchings)
    assert planar <= projective
    assert all(is_projective_matching(m) for m in projective)
    assert get_kempe(r, PROJECTIVE).raw_count >= len(projective)


def test_projective_table_r2_has_crossing_pair():
    table = get_kempe(2, PROJECTIVE)
    assert len(table) == 3
    assert frozenset({(0, 2), (1, 3)}) in table.matchings


def test_matching_predicates():
    assert is_planar_matching([(0, 1), (2, 3)])
    assert not is_planar_matching([(0, 2), (1, 3)])
    assert is_projective_matching([(0, 2), (1, 3)])
    assert is_projective_matching([(0, 3), (1, 4), (2, 5)])
    assert not is_projective_matching([(0, 2), (1, 4), (3, 5)])
    assert not is_projective_matching([(0, 1), (1, 2)])


def test_kempe_arguments():
    with pytest.raises(RangeError):
        get_kempe(2, 'torus')
    with pytest.raises(RangeError):
        get_kempe(-1)


def test_kempe_cache_written(tmp_path):
    cache = str(tmp_path / 'kempe')
    table = get_kempe(3, PLANAR, cache_dir=cache, use_config=False)
    path = os.path.join(cache, 'kempe_v1_planar_3.txt')
    assert os.path.exists(path)
    with open(path, 'r', encoding='utf-8') as f:
        assert f.readline().split() == ['kempe', '3', 'planar', str(len(table))]


def test_corrupt_cache_is_recomputed(tmp_path):
    cache = tmp_path / 'bad'
    cache.mkdir()
    (cache / 'kempe_v1_planar_4.txt').write_text('kempe 4 planar 999\n1-2 3-4\n', encoding='utf-8')
    table = get_kempe(4, PLANAR, cache_dir=str(cache), use_config=False)
    assert len(table) == 14


def test_theta_fit_and_neighbors():
    coloring = (0, 1, 0, 1)
    matching = [SignedMatch(0, 1, -1), SignedMatch(2, 3, -1)]
    assert theta_fit(coloring, matching, 2)
    assert not theta_fit(coloring, [SignedMatch(0, 2, 1)], 2)
    neighbors = fit_neighbors(coloring, matching, 2)
    assert neighbors == {(0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0)}
    with pytest.raises(ColoringError):
        fit_neighbors(coloring, [SignedMatch(0, 1, 1), SignedMatch(2, 3, -1)], 2)


def test_signed_match_normalizes():
    m = SignedMatch(3, 1, -1)
    assert m.pair == (1, 3)
    with pytest.raises(ColoringError):
        SignedMatch(2, 2)
