# @time:    2026-03-02

import os
import sys
from datetime import datetime
from loguru import logger


class LogManager:
    '''
    日志记录器封装

    stderr 输出级别由 MTC_LOG_LEVEL 控制（默认 WARNING），保证 stdout 上的报告可逐字节比对；
    设置 MTC_LOG_DIR 时额外写入按日期命名的日志文件。
    '''

    _configured = False

    @classmethod
    def setup_logging(cls):
        if cls._configured:
            return
        logger.remove()
        level = os.getenv("MTC_LOG_LEVEL", "WARNING").upper()
        logger.add(sys.stderr, level=level)

        log_dir = os.getenv("MTC_LOG_DIR")
        if log_dir:
            if not os.path.exists(log_dir):
                os.makedirs(log_dir)
            log_name = datetime.now().strftime("%Y-%m-%d")  # 日志文件名命名格式为“年-月-日”
            logger.add(
                sink=os.path.join(log_dir, "{}.log".format(log_name)),
                level="DEBUG",
                encoding="utf-8",
                enqueue=True,  # 多线程时保证线程安全
                rotation="50 MB",
                retention="1 week",
            )
        cls._configured = True

    @staticmethod
    def get_logger():
        return logger


# 在工程开始时初始化设置日志记录器
LogManager.setup_logging()

# 获取日志记录器实例，用于其他模块调用
log = LogManager.get_logger()
