import os
import tempfile

# 必须在导入 app 之前设置，config_manager 在导入时读取
_HOME = tempfile.mkdtemp(prefix='snarklab_test_')
os.environ['SNARKLAB_HOME'] = _HOME
os.environ['SNARKLAB_CACHE'] = os.path.join(_HOME, 'kempe')

import pytest

from app.core.configurations import parse_configuration
from app.core.graph import parse_graph

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, 'data')


def pytest_addoption(parser):
    parser.addoption('--heavy', action='store_true', default=False, help='运行 heavy 标记的测试')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--heavy'):
        return
    skip = pytest.mark.skip(reason='需要 --heavy')
    for item in items:
        if 'heavy' in item.keywords:
            item.add_marker(skip)


def data_path(*parts):
    return os.path.join(DATA, *parts)


def load_graph(name):
    with open(data_path('graphs', name), 'r', encoding='utf-8') as f:
        return parse_graph(f.read())


def load_conf(name):
    with open(data_path('confs', name), 'r', encoding='utf-8') as f:
        return parse_configuration(f.read(), os.path.splitext(name)[0])


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def petersen():
    return load_graph('petersen.cub')


@pytest.fixture
def k4():
    return load_graph('k4.cub')


@pytest.fixture
def prism():
    return load_graph('prism.cub')


@pytest.fixture
def isolated_config(tmp_path):
    from app.common.config_manager import Config
    return Config(str(tmp_path / 'home'))
