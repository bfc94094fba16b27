"""
领域异常定义
"""


class SnarklabError(ValueError):
    """ 所有领域错误的基类 """


class GraphFormatError(SnarklabError):
    """ 图文件格式错误 """


class DegreeError(SnarklabError):
    """ 顶点度数不满足约束 """


class NotCubicError(SnarklabError):
    """ 需要三正则图 """


class EmbeddingError(SnarklabError):
    """ 嵌入不合法（面追踪失败或欧拉示性数不符） """


class ColoringError(SnarklabError):
    """ 着色或 Kempe 链前置条件不满足 """


class BridgeError(SnarklabError):
    """ 图中存在桥 """


class CutError(SnarklabError):
    """ 割不合法 """


class ConfigurationError(SnarklabError):
    """ 构形不满足定义中的某一条款 """

    def __init__(self, clause: str, message: str):
        super().__init__(f"[{clause}] {message}")
        self.clause = clause


class CompletionError(SnarklabError):
    """ 无法构造自由补全 """


class RuleFormatError(SnarklabError):
    """ 放电规则文件格式错误 """


class ReducibilityError(SnarklabError):
    """ 可约性检查的前置条件不满足 """


class RangeError(SnarklabError):
    """ 参数超出允许范围 """


class ResourceLimitError(SnarklabError):
    """ 搜索超出资源上限 """


class InconclusiveError(SnarklabError):
    """ 路径枚举超出上限，结论不确定 """
