import json
import os

import pytest

from app.common.config_manager import DEFAULTS, Config


def test_defaults(isolated_config):
    assert isolated_config.get_jobs() == 1
    assert isolated_config.get_max_contraction() == 4
    assert isolated_config.get_path_caps() == (6, 10000)
    assert isolated_config.get_log_level() == 'INFO'
    assert os.path.exists(isolated_config.config_file)


def test_set_persists(isolated_config):
    isolated_config.set_jobs(3)
    again = Config(isolated_config.config_dir)
    assert again.get_jobs() == 3


def test_unknown_key(isolated_config):
    with pytest.raises(KeyError):
        isolated_config.set('output_dir', '/tmp')


def test_bad_file_falls_back_to_defaults(tmp_path):
    home = tmp_path / 'home'
    home.mkdir()
    (home / 'config.json').write_text('{not json', encoding='utf-8')
    config = Config(str(home))
    assert config.get('seed') == DEFAULTS['seed']


def test_unknown_stored_keys_ignored(tmp_path):
    home = tmp_path / 'home'
    home.mkdir()
    (home / 'config.json').write_text(json.dumps({'jobs': 0, 'theme': 'dark'}), encoding='utf-8')
    config = Config(str(home))
    assert config.get_jobs() == 1
    with pytest.raises(KeyError):
        config.get('theme')


def test_cache_dir(isolated_config, monkeypatch):
    assert isolated_config.get_kempe_cache_dir() == os.environ['SNARKLAB_CACHE']
    monkeypatch.delenv('SNARKLAB_CACHE')
    assert isolated_config.get_kempe_cache_dir() == os.path.join(isolated_config.config_dir, 'kempe')


def test_confluence_seeds(tmp_path):
    assert Config(str(tmp_path / 'a')).get_confluence_seeds() == 20
    home = tmp_path / 'b'
    home.mkdir()
    (home / 'config.json').write_text(json.dumps({'confluence_seeds': 0}), encoding='utf-8')
    assert Config(str(home)).get_confluence_seeds() == 1
