"""
命令行前端：过程描述文件、内置场景、报告输出与子命令
"""
