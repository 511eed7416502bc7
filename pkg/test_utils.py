"""
Tests for JSON-safe conversion, canonical dumps, atomic writes and timers.
"""

import json
import math
import os

import numpy as np
import pytest

from asymptotics import estimate_net, power_net
from utils import Timer, dump_json, safe_value, status, write_atomic


@pytest.mark.parametrize("value, expected", [
    (np.float64(1.5), 1.5),
    (np.int32(3), 3),
    (np.bool_(True), True),
    (math.inf, "inf"),
    (-math.inf, "-inf"),
    (math.nan, "nan"),
    (2 + 0j, 2.0),
    (1 - 2j, {"re": 1.0, "im": -2.0}),
    ((1, 2), [1, 2]),
    (frozenset({3.0, 1.0}), [1.0, 3.0]),
    (np.array([1.0, 2.0]), [1.0, 2.0]),
    (None, None),
])
def test_safe_value(value, expected):
    assert safe_value(value) == expected


def test_safe_value_uses_to_dict():
    out = safe_value({"d": estimate_net(power_net(1.0))})
    assert out["d"]["classification"] == "Order"


def test_dump_json_is_canonical():
    a = dump_json({"b": 1, "a": [math.inf, np.float64(0.5)]})
    b = dump_json({"a": [math.inf, 0.5], "b": 1})
    assert a == b
    assert a.endswith("\n")
    assert json.loads(a) == {"a": ["inf", 0.5], "b": 1}


def test_write_atomic(tmp_path):
    path = tmp_path / "out" / "report.json"
    write_atomic(str(path), "first\n")
    write_atomic(str(path), "second\n")
    assert path.read_text(encoding="utf-8") == "second\n"
    assert [p for p in os.listdir(path.parent) if p.startswith(".tmp-")] == []


def test_timer_records_milliseconds():
    with Timer("noop") as timer:
        sum(range(1000))
    assert timer.elapsed_ms >= 0.0


def test_status_prints_to_stderr(capsys):
    status("ok", "done")
    assert "done" in capsys.readouterr().err
