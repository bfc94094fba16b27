"""
子命令与报告格式的映射
"""

# 报告格式
REPORT_FORMATS = {
    'jsonl': 'JSON 行',
    'tsv': '制表符分隔表格',
    'text': '纯文本摘要',
}

# 子命令 -> (报告格式, 默认文件后缀)
VERB_FORMATS = {
    'color': ('jsonl', '.jsonl'),
    'cuts': ('jsonl', '.jsonl'),
    'petersen-like': ('jsonl', '.jsonl'),
    'kempe': ('jsonl', '.jsonl'),
    'reduce-check': ('jsonl', '.jsonl'),
    'families': ('tsv', '.tsv'),
    'cut-analysis': ('jsonl', '.jsonl'),
    'discharge': ('jsonl', '.jsonl'),
    'dist5': ('jsonl', '.jsonl'),
    'safety': ('jsonl', '.jsonl'),
    'verify-all': ('text', '.txt'),
}



def get_report_format(verb: str) -> str:
    """获取子命令的报告格式

    Args:
        verb: 子命令名

    Returns:
        'jsonl'、'tsv' 或 'text'
    """
    if verb not in VERB_FORMATS:
        raise KeyError(f"未知的子命令: {verb}")
    return VERB_FORMATS[verb][0]


def default_report_name(verb: str) -> str:
    """子命令默认的报告文件名，如 dist5.jsonl"""
    fmt, suffix = VERB_FORMATS[verb]
    return verb.replace('-', '_') + suffix
