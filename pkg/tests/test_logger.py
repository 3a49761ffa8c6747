import pytest

import logger


@pytest.fixture(autouse=True)
def restore_levels():
    yield
    logger.set_print_level("WARN")
    logger.set_log_level("DEBUG")
    logger.set_file_logging_enabled(False)
    logger.close_logger()
    logger.set_logs_dir("logs")


def test_print_threshold(capsys):
    logger.set_print_level("WARN")
    logger.info("quiet")
    logger.warn("loud")
    err = capsys.readouterr().err
    assert "quiet" not in err
    assert "[WARN]" in err and "loud" in err
    assert "test_logger.py:" in err


def test_invalid_level_rejected():
    with pytest.raises(ValueError):
        logger.trace("VERBOSE", "message")


def test_file_logging_writes_level_file(tmp_path):
    logger.apply_config({
        "print_level": "ERROR",
        "log_level": "INFO",
        "log_dir": str(tmp_path),
        "log_to_file": True,
    })
    logger.info("to file")
    logger.close_logger()
    files = list(tmp_path.glob("*info*"))
    assert files
    assert "to file" in files[0].read_text()
