import logging
from datetime import datetime
from pathlib import Path

from finitree.config import get_config


def setup_logger(name='root', log_file=None):
    cfg = get_config()["global"]
    log_dir = Path(cfg["log_dir"])

    if not log_dir.exists():
        log_dir.mkdir(parents=True)

    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    if log_file is None:
        log_file = log_dir / f'log_{datetime.now().strftime("%Y%m%d")}.log'

    level = getattr(logging, cfg["log_level"], logging.DEBUG)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    logger.handlers = []

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(level)
    file_formatter = logging.Formatter(log_format)
    file_handler.setFormatter(file_formatter)
    logger.addHandler(file_handler)

    logger.propagate = False

    return logger
