import io
import json

import pandas as pd
import pytest

from app.core.format_mapping import default_report_name, get_report_format
from app.view.report_writer import ReportWriter, RunManifest, dumps, file_digest, payload_digest, read_jsonl
from conftest import data_path


def test_dumps_is_canonical():
    assert dumps({'b': 1, 'a': (1, 2), 'c': frozenset({3, 2})}) == '{"a":[1,2],"b":1,"c":[2,3]}'


def test_jsonl_with_manifest():
    stream = io.StringIO()
    manifest = RunManifest.start(['kempe', '--r', '2'], [], 0)
    body = ReportWriter('kempe', stream=stream).write([{'b': 1, 'a': 2}], manifest)
    assert body == '{"a":2,"b":1}\n'
    lines = stream.getvalue().splitlines()
    assert len(lines) == 2
    tail = json.loads(lines[1])['manifest']
    assert tail['result_digest'] == payload_digest(body)
    assert tail['command'] == ['kempe', '--r', '2']


def test_manifest_digest_ignores_wall_time():
    first = RunManifest(['x'])
    second = RunManifest(['x'])
    first.finish('same\n')
    second.finish('same\n')
    second.wall_time = 12.5
    assert first.result_digest == second.result_digest


def test_manifest_hashes_inputs():
    path = data_path('graphs', 'k4.cub')
    manifest = RunManifest.start(['color', path], [path, 'missing.cub'], 3)
    assert manifest.inputs == {'k4.cub': file_digest(path)}
    assert manifest.seed == 3


def test_tsv_report(tmp_path):
    frame = pd.DataFrame([{'id': 'pi-0', 'verdict': 'D'}, {'id': 'pi-1', 'verdict': 'C'}])
    writer = ReportWriter('families', str(tmp_path))
    writer.write(frame, RunManifest(['families']))
    text = (tmp_path / 'families.tsv').read_text(encoding='utf-8')
    assert text.startswith('id\tverdict\npi-0\tD\npi-1\tC\n')
    assert text.splitlines()[-1].startswith('# {"manifest"')
    with pytest.raises(TypeError):
        writer.render([{'id': 'pi-0'}])


def test_text_report():
    stream = io.StringIO()
    ReportWriter('verify-all', stream=stream).write('1 通过', RunManifest(['verify-all']))
    first, second = stream.getvalue().splitlines()
    assert first == '1 通过'
    assert second.startswith('# ')


def test_read_jsonl_skips_manifest(tmp_path):
    target = tmp_path / 'out.jsonl'
    ReportWriter('color', str(target)).write([{'id': 'k4'}, {'id': 'prism'}], RunManifest(['color']))
    assert read_jsonl(str(target)) == [{'id': 'k4'}, {'id': 'prism'}]


@pytest.mark.parametrize('verb, fmt, name', [
    ('dist5', 'jsonl', 'dist5.jsonl'),
    ('families', 'tsv', 'families.tsv'),
    ('verify-all', 'text', 'verify_all.txt'),
    ('petersen-like', 'jsonl', 'petersen_like.jsonl'),
])
def test_report_formats(verb, fmt, name):
    assert get_report_format(verb) == fmt
    assert default_report_name(verb) == name


def test_unknown_verb():
    with pytest.raises(KeyError):
        get_report_format('convert')
