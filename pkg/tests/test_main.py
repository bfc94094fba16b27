import json

import pandas as pd
import pytest

from app.main import build_parser, main
from app.view.report_writer import read_jsonl
from conftest import data_path


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_kempe_verb(capsys):
    assert main(['kempe', '--r', '4']) == 0
    lines = records(capsys.readouterr().out)
    assert lines[0]['count'] == 14
    assert lines[0]['kind'] == 'planar'
    assert 'manifest' in lines[-1]


def test_color_reports_petersen_obstruction(capsys):
    assert main(['color', data_path('graphs', 'petersen.cub'), data_path('graphs', 'prism.cub')]) == 0
    first, second, manifest = records(capsys.readouterr().out)
    assert first['id'] == 'petersen'
    assert first['colorable'] is False
    assert first['obstruction'] == 'P10'
    assert second['colorable'] is True
    assert set(manifest['manifest']['inputs']) == {'petersen.cub', 'prism.cub'}


def test_report_written_to_directory(tmp_path):
    assert main(['cuts', data_path('graphs', 'petersen.cub'), '--report', str(tmp_path)]) == 0
    rows = read_jsonl(str(tmp_path / 'cuts.jsonl'))
    assert len(rows) == 1
    assert rows[0]['cyclic_connectivity'] == 5


def test_discharge_on_icosahedron(capsys):
    argv = ['discharge', '--rules', data_path('rules', 'sample.rule'), '--graph', data_path('graphs', 'icosahedron.cub')]
    assert main(argv) == 0
    record = records(capsys.readouterr().out)[0]
    assert record['expected'] == 120
    assert record['matches_expected'] is True


def test_safety_verb(capsys):
    assert main(['safety', data_path('confs', 'triangle.conf')]) == 0
    record = records(capsys.readouterr().out)[0]
    assert record['witness'] == 'no-contraction'
    assert record['consistent'] is True


def test_dist5_verb(capsys):
    assert main(['dist5', data_path('confs', 'strip.conf'), '--counting', 'intended']) == 0
    record = records(capsys.readouterr().out)[0]
    assert record['id'] == 'strip'
    assert record['counting'] == 'intended'


@pytest.mark.parametrize('argv', [[], ['bogus'], ['kempe'], ['cut-analysis', 'x.cub', '--size', '6']])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_missing_file_is_an_error():
    assert main(['color', 'no-such-graph.cub']) == 1


@pytest.mark.parametrize('argv', [
    ['kempe', '--r', '3', '--jobs', '0'],
    ['reduce-check', data_path('confs', 'triangle.conf'), '--max-contraction', '9'],
    ['kempe', '--r', '-2'],
])
def test_domain_errors(argv):
    assert main(argv) == 1


def test_parser_covers_every_verb():
    parser = build_parser()
    args = parser.parse_args(['verify-all', '--only', '1', '3'])
    assert args.only == ['1', '3']
    assert args.max_contraction is None


@pytest.mark.slow
def test_families_table(tmp_path):
    target = tmp_path / 'pi.tsv'
    assert main(['families', '--family', 'pi', '--y', '3', '--k', '6', '--report', str(target)]) == 0
    frame = pd.read_csv(target, sep='\t', comment='#')
    assert len(frame) == 14
    assert set(frame['verdict']) <= {'D', 'C'}
