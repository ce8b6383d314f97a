import sys
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

LEVELS = {"DEBUG": logging.DEBUG, "INFO": logging.INFO, "WARNING": logging.WARNING, "ERROR": logging.ERROR}


def setup_logger(name="TubularCalc", log_file="calc.log", level=logging.INFO):
    """
    配置日志系统
    :param log_file: 日志文件路径
    :param level: 日志级别 (INFO, DEBUG, ERROR)
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # 防止重复添加 Handler
    if logger.handlers:
        return logger

    # 格式: [时间] [级别] [模块] 消息
    formatter = logging.Formatter(
        fmt='%(asctime)s | %(levelname)-8s | %(module)-10s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # 文件处理器 (单个最大10MB，保留5个备份)
    file_handler = RotatingFileHandler(log_file, maxBytes=10*1024*1024, backupCount=5, encoding='utf-8')
    file_handler.setFormatter(formatter)

    # 控制台处理器走 stderr，stdout 留给计算报告
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)
    return logger


def set_level(level_name: str):
    """按配置里的名字 (DEBUG/INFO/WARNING/ERROR) 调整全局 logger 的级别"""
    logger.setLevel(LEVELS.get(str(level_name).upper(), logging.INFO))


# 日志文件保存在项目根目录下的 logs 文件夹
log_dir = Path("logs")
log_dir.mkdir(exist_ok=True)
log_file = log_dir / "calc.log"
logger = setup_logger(log_file=log_file)
