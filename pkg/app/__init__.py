"""
snarklab - 三正则图三边着色与可约性检查工具
"""

__version__ = '0.1.0'
