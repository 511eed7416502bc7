"""
Tests for batching and ordered parallel execution.
"""

import threading
import time

import pytest

from workers import batch_operations, run_ordered


def test_batches():
    assert list(batch_operations(list(range(7)), 3)) == [[0, 1, 2], [3, 4, 5], [6]]
    assert list(batch_operations([], 3)) == []
    with pytest.raises(ValueError):
        list(batch_operations([1], 0))


def test_sequential_run():
    assert run_ordered([lambda i=i: i * i for i in range(5)]) == [0, 1, 4, 9, 16]


def test_parallel_run_keeps_input_order():
    def task(i):
        time.sleep(0.01 * (5 - i))
        return i, threading.current_thread().name

    results = run_ordered([lambda i=i: task(i) for i in range(6)], jobs=3)
    assert [r[0] for r in results] == list(range(6))
    assert len({r[1] for r in results}) > 1


def test_errors_propagate():
    def fail():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        run_ordered([lambda: 1, fail], jobs=2)
