"""
核心功能模块
""" 