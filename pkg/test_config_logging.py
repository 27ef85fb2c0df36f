# test_config_logging.py
import logging
import logging.handlers

import pytest

from config import Config
from logger_config import ColoredFormatter, ComputationLogger, PlainFormatter, log_command, setup_logging


@pytest.fixture(autouse=True)
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def test_defaults_validate():
    errors, warnings = Config.validate_config()
    assert errors == []
    assert isinstance(warnings, list)


def test_invalid_settings_are_errors(monkeypatch):
    monkeypatch.setattr(Config, "CLASSIFY_WORKERS", 0)
    monkeypatch.setattr(Config, "TILA_CACHE_SIZE", 0)
    errors, _ = Config.validate_config()
    assert "CLASSIFY_WORKERS must be at least 1" in errors
    assert "TILA_CACHE_SIZE must be at least 1" in errors


def test_missing_schema_dir(monkeypatch, tmp_path):
    monkeypatch.setattr(Config, "SCHEMA_DIR", str(tmp_path / "missing"))
    errors, _ = Config.validate_config()
    assert any("Schema directory not found" in e for e in errors)


def test_service_info_reflects_file_logging(monkeypatch):
    assert Config.get_service_info()["logging"]["file"] is None
    monkeypatch.setattr(Config, "LOG_TO_FILE", True)
    assert Config.get_service_info()["logging"]["file"].endswith(Config.LOG_FILE)


def test_setup_logging_console_only():
    root = setup_logging(level="DEBUG", log_to_file=False)
    assert root.level == logging.DEBUG
    assert len(root.handlers) == 1
    assert isinstance(root.handlers[0].formatter, PlainFormatter)


def test_setup_logging_with_files(monkeypatch, tmp_path):
    monkeypatch.setattr(Config, "LOG_DIR", str(tmp_path / "logs"))
    root = setup_logging(level="INFO", log_to_file=True)
    rotating = [h for h in root.handlers if isinstance(h, logging.handlers.RotatingFileHandler)]
    assert len(rotating) == 2
    assert any(h.level == logging.ERROR for h in rotating)
    logging.getLogger("tila").info("written")
    assert (tmp_path / "logs" / Config.LOG_FILE).exists()


def test_colored_formatter_colors_the_level_only():
    formatter = ColoredFormatter(fmt="%(levelname)s | %(message)s")
    record = logging.LogRecord("tila", logging.ERROR, __file__, 1, "ERROR in message", None, None)
    text = formatter.format(record)
    assert text.endswith("| ERROR in message")
    assert text.count("\x1b[") == 2


def test_computation_logger(caplog):
    caplog.set_level(logging.INFO)
    computation = ComputationLogger("tila")
    computation.start("radical", "n=2")
    computation.success("radical", "dim 5")
    computation.error("levi", ValueError("boom"))
    assert "[COMPUTE] Starting radical for n=2" in caplog.text
    assert "[SUCCESS] radical completed in" in caplog.text
    assert "(dim 5)" in caplog.text
    assert "[ERROR] levi failed: boom" in caplog.text


def test_log_command_reraises(caplog):
    @log_command
    def failing():
        raise RuntimeError("nope")

    with pytest.raises(RuntimeError):
        failing()
    assert "[ERROR] failing - nope" in caplog.text
