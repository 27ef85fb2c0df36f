# app/logger_config.py
import functools
import logging
import logging.handlers
import os
import sys
import time
from datetime import datetime

from colorama import Fore, Style, just_fix_windows_console

from config import Config

LOG_FORMAT = '%(asctime)s | %(name)s | %(levelname)s | %(funcName)s:%(lineno)d | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class ColoredFormatter(logging.Formatter):
    """Custom formatter to add colors to log levels"""

    COLORS = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.LIGHTRED_EX,
    }

    RESET = Style.RESET_ALL

    def format(self, record):
        original_format = super().format(record)
        color = self.COLORS.get(record.levelname, self.RESET)
        # Color the level name only
        colored_level = f"{color}{record.levelname}{self.RESET}"
        return original_format.replace(record.levelname, colored_level, 1)


class PlainFormatter(logging.Formatter):
    """Formatter without color codes for files and non-terminal streams"""


class ComputationLogger:
    """Logs start, completion time and failure of a named computation"""

    def __init__(self, name="computation"):
        self.logger = logging.getLogger(name)
        self._started = {}

    def start(self, operation, subject=None):
        self._started[operation] = time.time()
        if subject:
            self.logger.info(f"[COMPUTE] Starting {operation} for {subject}")
        else:
            self.logger.info(f"[COMPUTE] Starting {operation}")

    def success(self, operation, detail=None):
        started = self._started.pop(operation, None)
        suffix = f" ({detail})" if detail else ""
        if started is not None:
            self.logger.info(f"[SUCCESS] {operation} completed in {time.time() - started:.2f}s{suffix}")
        else:
            self.logger.info(f"[SUCCESS] {operation} completed{suffix}")

    def error(self, operation, error):
        self._started.pop(operation, None)
        self.logger.error(f"[ERROR] {operation} failed: {str(error)}")


def is_windows():
    """Check if running on Windows"""
    return sys.platform.startswith('win')


def setup_logging(level=None, log_to_file=None):
    """Console logging on stderr (colored when it is a terminal) plus rotating files"""
    level = level or Config.LOG_LEVEL
    log_to_file = Config.LOG_TO_FILE if log_to_file is None else log_to_file

    logger = logging.getLogger()
    logger.setLevel(getattr(logging, level.upper()))
    logger.handlers.clear()

    # stdout carries JSON reports
    console_handler = logging.StreamHandler(sys.stderr)
    if is_windows():
        just_fix_windows_console()
    if sys.stderr.isatty():
        console_handler.setFormatter(ColoredFormatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    else:
        console_handler.setFormatter(PlainFormatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(console_handler)

    if log_to_file:
        os.makedirs(Config.LOG_DIR, exist_ok=True)
        file_formatter = PlainFormatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)

        file_handler = logging.handlers.RotatingFileHandler(
            filename=os.path.join(Config.LOG_DIR, Config.LOG_FILE),
            maxBytes=Config.LOG_MAX_BYTES,
            backupCount=Config.LOG_BACKUP_COUNT,
            encoding='utf-8'
        )
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

        error_handler = logging.handlers.RotatingFileHandler(
            filename=os.path.join(Config.LOG_DIR, 'error.log'),
            maxBytes=Config.LOG_MAX_BYTES,
            backupCount=Config.LOG_BACKUP_COUNT,
            encoding='utf-8'
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(file_formatter)
        logger.addHandler(error_handler)

    return logger


def get_logger(name):
    """Get a logger with the specified name"""
    return logging.getLogger(name)


def log_system_info():
    """Log startup information"""
    logger = get_logger("system")
    logger.info("=" * 50)
    logger.info("[STARTUP] tiLa workbench starting")
    logger.info(f"[INFO] Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info(f"[CONFIG] Log Level: {Config.LOG_LEVEL}")
    logger.info(f"[CONFIG] Grid: height {Config.CLASSIFY_GRID_HEIGHT}, range {Config.CLASSIFY_GRID_RANGE}")
    logger.info(f"[CONFIG] Scan Workers: {Config.CLASSIFY_WORKERS}")
    logger.info(f"[SYSTEM] Platform: {sys.platform}")
    logger.info(f"[SYSTEM] Python Version: {sys.version.split()[0]}")
    logger.info("=" * 50)


def log_command(func):
    """Decorator to log CLI commands"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger("cli")
        logger.info(f"[COMMAND] {func.__name__}")
        try:
            result = func(*args, **kwargs)
            logger.info(f"[RESPONSE] {func.__name__} - done")
            return result
        except Exception as e:
            logger.error(f"[ERROR] {func.__name__} - {str(e)}")
            raise
    return wrapper


def log_success(logger, message):
    logger.info(f"[SUCCESS] {message}")


def log_error(logger, message):
    logger.error(f"[ERROR] {message}")


def log_warning(logger, message):
    logger.warning(f"[WARNING] {message}")


def log_info(logger, message):
    logger.info(f"[INFO] {message}")


def log_debug(logger, message):
    logger.debug(f"[DEBUG] {message}")
