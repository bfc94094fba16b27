import pytest

from app.common.config_manager import DEFAULTS
from app.core.exceptions import RangeError
from app.view.acceptance import AcceptanceSuite


def test_confluence_seed_count():
    assert AcceptanceSuite().confluence_seeds == DEFAULTS['confluence_seeds'] == 20
    assert AcceptanceSuite(confluence_seeds=3).confluence_seeds == 3
    with pytest.raises(RangeError):
        AcceptanceSuite(confluence_seeds=0)


def test_missing_fixtures_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        AcceptanceSuite(str(tmp_path / 'nowhere'))


def test_petersen_check_with_many_seeds():
    ok, detail = AcceptanceSuite(seed=5, confluence_seeds=20).check_petersen()
    assert ok
    assert '顺序无关=True' in detail


def test_structure_tables_pass():
    ok, detail = AcceptanceSuite().check_structure_tables()
    assert ok
    assert 'hexagon 距离 5 组合 42 种, 可能相邻=False' in detail
    assert 'strip 可能相邻=True' in detail
