import json
import logging

import pytest

from stochastic_polytope.exceptions import ErrorContext, PolytopeError, handle_error
from stochastic_polytope.logging_config import _HANDLER_MARK, get_logger, setup_logging


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    level, handlers, filters = root.level, list(root.handlers), list(root.filters)
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    for existing in list(root.filters):
        if existing not in filters:
            root.removeFilter(existing)
    root.setLevel(level)


def read_json_lines(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def test_json_log_file_carries_run_id_and_extra(tmp_path, restore_root_logger):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging(
        log_file_path=str(log_file),
        log_level="INFO",
        run_id="run-1",
        log_format="timestamp level message run_id",
    )
    get_logger("stochastic_polytope.test").info("Enumerated vertices", extra={"total": 66})

    records = read_json_lines(log_file)
    assert records[-1]["message"] == "Enumerated vertices"
    assert records[-1]["run_id"] == "run-1"
    assert records[-1]["total"] == 66
    assert records[-1]["level"] == "INFO"
    assert "function" not in records[-1]


def test_text_log_format(tmp_path, restore_root_logger):
    log_file = tmp_path / "run.log"
    setup_logging(log_file_path=str(log_file), log_level="DEBUG", json_format=False, run_id="abc")
    get_logger("stochastic_polytope.test").debug("hello")
    line = log_file.read_text(encoding="utf-8").strip().splitlines()[-1]
    assert "| DEBUG | abc |" in line
    assert line.endswith("hello")


def test_setup_logging_replaces_its_own_handlers(tmp_path, restore_root_logger):
    def marked():
        return [h for h in logging.getLogger().handlers if getattr(h, _HANDLER_MARK, False)]

    setup_logging(log_file_path=str(tmp_path / "a.log"))
    first = marked()
    setup_logging(log_file_path=str(tmp_path / "b.log"))
    second = marked()
    assert len(first) == len(second) == 2
    assert not set(first) & set(second)


def test_size_rotation_handler(tmp_path, restore_root_logger):
    setup_logging(log_file_path=str(tmp_path / "r.log"), max_bytes=2048, backup_count=1)
    kinds = {type(h).__name__ for h in logging.getLogger().handlers}
    assert "RotatingFileHandler" in kinds


def test_handle_error_logs_context(tmp_path, restore_root_logger):
    log_file = tmp_path / "err.log"
    setup_logging(log_file_path=str(log_file), log_format="level message")
    error = PolytopeError("boom", ErrorContext(operation="enumerate_vertices", details={"n": 3}))
    handle_error(error, get_logger("stochastic_polytope.test"))
    record = read_json_lines(log_file)[-1]
    assert record["message"] == "Error during enumerate_vertices: boom"
    assert record["error_type"] == "PolytopeError"
    assert record["details"] == {"n": "3"}
