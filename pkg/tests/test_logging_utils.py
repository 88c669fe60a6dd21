import json
import logging
from fractions import Fraction

from stratakit.logging_utils import JsonLogFormatter, TextLogFormatter, configure_logging


def _record(**extra) -> logging.LogRecord:
    fields = {
        "name": "stratakit.resolution",
        "levelname": "INFO",
        "levelno": logging.INFO,
        "msg": "resolution_finished",
        "args": (),
    }
    fields.update(extra)
    return logging.makeLogRecord(fields)


def test_json_payload_carries_domain_context_in_order():
    line = JsonLogFormatter().format(
        _record(degree=2, module_name="S_2", algebra="a3", status=Fraction(1, 2))
    )
    payload = json.loads(line)
    assert payload["level"] == "info"
    assert payload["event"] == "resolution_finished"
    assert payload["where"] == "resolution"
    assert list(payload)[4:] == ["algebra", "module_name", "degree", "status"]
    assert payload["status"] == "1/2"


def test_json_payload_flattens_vertex_sets():
    payload = json.loads(JsonLogFormatter().format(_record(stage=frozenset({"3", "1"}))))
    assert payload["stage"] == ["1", "3"]


def test_text_formatter_appends_key_values():
    line = TextLogFormatter().format(_record(command="gldim", degree=1))
    assert line == "INFO    resolution_finished command=gldim degree=1"


def _package_handlers(logger: logging.Logger) -> list[logging.Handler]:
    return [h for h in logger.handlers if h.get_name() == "stratakit"]


def test_configure_logging_reuses_the_package_handler():
    first = configure_logging("info", json_output=True)
    second = configure_logging("debug", json_output=False)
    assert first is second
    ours = _package_handlers(second)
    assert len(ours) == 1
    assert second.level == logging.DEBUG
    assert isinstance(ours[0].formatter, TextLogFormatter)
    configure_logging("warning", json_output=True)


def test_configure_logging_leaves_other_handlers_alone():
    logger = logging.getLogger("stratakit")
    foreign = logging.NullHandler()
    plain = logging.Formatter("%(message)s")
    foreign.setFormatter(plain)
    logger.addHandler(foreign)
    try:
        configure_logging("info", json_output=False)
        configure_logging("info", json_output=True)
        assert foreign.formatter is plain
        assert foreign in logger.handlers
        ours = _package_handlers(logger)
        assert len(ours) == 1
        assert isinstance(ours[0].formatter, JsonLogFormatter)
    finally:
        logger.removeHandler(foreign)
        configure_logging("warning", json_output=True)
