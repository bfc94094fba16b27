"""
报告写出：JSON 行、TSV 表格与文本摘要，以及运行清单
"""
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from app import __version__
from app.core.format_mapping import REPORT_FORMATS, default_report_name, get_report_format

logger = logging.getLogger(__name__)


def _default(obj):
    # numpy/pandas 标量与集合
    if hasattr(obj, 'item'):
        return obj.item()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"无法序列化的类型: {type(obj).__name__}")


def dumps(record: dict) -> str:
    """键排序、无多余空白的 JSON 行"""
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(',', ':'), default=_default)


def file_digest(path: str) -> str:
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b''):
            sha.update(chunk)
    return sha.hexdigest()


def payload_digest(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


@dataclass
class RunManifest:
    """ 运行清单；wall_time 不计入结果摘要 """

    command: List[str]
    inputs: Dict[str, str] = field(default_factory=dict)
    seed: int = 0
    version: str = __version__
    wall_time: float = 0.0
    result_digest: str = ''
    started: Optional[float] = field(default=None, repr=False, compare=False)

    @classmethod
    def start(cls, command: Sequence[str], input_paths: Iterable[str], seed: int) -> "RunManifest":
        inputs = {}
        for path in input_paths:
            if os.path.isfile(path):
                inputs[os.path.basename(path)] = file_digest(path)
        manifest = cls(list(command), inputs, seed)
        manifest.started = time.perf_counter()
        return manifest

    def finish(self, payload: str):
        self.result_digest = payload_digest(payload)
        if self.started is not None:
            self.wall_time = round(time.perf_counter() - self.started, 3)

    def to_record(self) -> dict:
        return {
            'manifest': {
                'command': self.command,
                'inputs': self.inputs,
                'seed': self.seed,
                'version': self.version,
                'wall_time': self.wall_time,
                'result_digest': self.result_digest,
            }
        }


class ReportWriter:
    """ 按子命令选择格式写出报告；target 为 None 时写到标准输出 """

    def __init__(self, verb: str, target: Optional[str] = None, stream=None):
        self.verb = verb
        self.format = get_report_format(verb)
        self.target = target
        self.stream = stream
        self.logger = logging.getLogger(__name__)

    def render(self, payload) -> str:
        """payload: jsonl 为记录列表，tsv 为 DataFrame，text 为字符串"""
        if self.format == 'jsonl':
            return ''.join(dumps(r) + '\n' for r in payload)
        if self.format == 'tsv':
            if not isinstance(payload, pd.DataFrame):
                raise TypeError("TSV 报告需要 DataFrame")
            return payload.to_csv(sep='\t', index=False, lineterminator='\n')
        text = str(payload)
        return text if text.endswith('\n') else text + '\n'

    def write(self, payload, manifest: Optional[RunManifest] = None) -> str:
        """写出报告并在末尾追加清单；返回报告正文（不含清单）"""
        body = self.render(payload)
        tail = ''
        if manifest is not None:
            manifest.finish(body)
            line = dumps(manifest.to_record())
            tail = line + '\n' if self.format == 'jsonl' else f"# {line}\n"
        if self.target is None:
            out = self.stream if self.stream is not None else sys.stdout
            out.write(body + tail)
            out.flush()
        else:
            path = self.target
            if os.path.isdir(path):
                path = os.path.join(path, default_report_name(self.verb))
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(body + tail)
            self.logger.info(f"{REPORT_FORMATS[self.format]}报告已写出: {path}")
        return body


def read_jsonl(path: str) -> List[dict]:
    """读取 JSON 行报告，跳过清单行"""
    records = []
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if 'manifest' not in record:
                records.append(record)
    return records
