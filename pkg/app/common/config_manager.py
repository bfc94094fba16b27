import json
import logging
import os


DEFAULTS = {
    'log_level': 'INFO',
    'kempe_cache_dir': None,
    'kempe_memo_limit': 9,
    'jobs': 1,
    'seed': 0,
    'max_contraction': 4,
    'path_cap': 10000,
    'path_length_cap': 6,
    'send_case_round_cap': 8,
    'cartwheel_case_cap': 200000,
    'confluence_seeds': 20,
}


class Config:
    """ 配置类 """

    def __init__(self, config_dir=None):
        if config_dir is None:
            config_dir = os.environ.get('SNARKLAB_HOME') or os.path.join(os.path.expanduser('~'), '.snarklab')
        self.config_dir = config_dir
        self.config_file = os.path.join(self.config_dir, 'config.json')
        self.logger = logging.getLogger(__name__)
        self._values = dict(DEFAULTS)
        self._ensure_config_exists()
        self._load()

    def _ensure_config_exists(self):
        """确保配置文件存在"""
        try:
            if not os.path.exists(self.config_dir):
                os.makedirs(self.config_dir)
            if not os.path.exists(self.config_file):
                with open(self.config_file, 'w', encoding='utf-8') as f:
                    json.dump(DEFAULTS, f, ensure_ascii=False, indent=4)
        except OSError as e:
            self.logger.warning(f"无法创建配置文件 {self.config_file}: {e}")

    def _load(self):
        """读取配置文件，未知键忽略"""
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                stored = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.warning(f"读取配置失败，使用默认值: {e}")
            return
        for key, value in stored.items():
            if key in DEFAULTS:
                self._values[key] = value

    def save(self):
        """保存配置"""
        with open(self.config_file, 'w', encoding='utf-8') as f:
            json.dump(self._values, f, ensure_ascii=False, indent=4)

    def get(self, key):
        return self._values[key]

    def set(self, key, value):
        if key not in DEFAULTS:
            raise KeyError(f"未知的配置项: {key}")
        self._values[key] = value
        self.save()

    def get_log_level(self):
        """获取日志级别"""
        return str(self._values['log_level']).upper()

    def get_kempe_cache_dir(self):
        """获取 Kempe 表缓存目录，环境变量 SNARKLAB_CACHE 优先"""
        return (
            os.environ.get('SNARKLAB_CACHE')
            or self._values['kempe_cache_dir']
            or os.path.join(self.config_dir, 'kempe')
        )

    def get_kempe_memo_limit(self):
        """获取 Kempe 表缓存的最大 r"""
        return int(self._values['kempe_memo_limit'])

    def get_jobs(self):
        """获取批处理并行进程数"""
        return max(1, int(self._values['jobs']))

    def set_jobs(self, jobs: int):
        """设置批处理并行进程数"""
        self.set('jobs', int(jobs))

    def get_seed(self):
        """获取随机种子"""
        return int(self._values['seed'])

    def get_max_contraction(self):
        """获取收缩边集的默认上限"""
        return int(self._values['max_contraction'])

    def get_path_caps(self):
        """获取路径枚举的长度上限与数量上限"""
        return int(self._values['path_length_cap']), int(self._values['path_cap'])

    def get_send_case_round_cap(self):
        return int(self._values['send_case_round_cap'])

    def get_cartwheel_case_cap(self):
        return int(self._values['cartwheel_case_cap'])

    def get_confluence_seeds(self):
        """获取合流性检查使用的随机约化顺序个数"""
        return max(1, int(self._values['confluence_seeds']))


# 创建全局配置管理器实例
config_manager = Config()
