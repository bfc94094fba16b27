"""
输出模块：报告写出、批量任务与验收检查
"""
