# utils.py - Status console, timers, JSON-safe values and atomic writes

import json
import math
import os
import tempfile
import time

import numpy as np
from rich.console import Console

console = Console(stderr=True, highlight=False)

ICONS = {
    "start": "🔧",
    "ok": "✅",
    "fail": "❌",
    "warn": "⚠️",
    "total": "🎯",
    "data": "📊",
    "file": "📁",
}


def status(kind, message):
    """Print one status line with the matching emoji prefix."""
    console.print(f"{ICONS.get(kind, '')} {message}")


def safe_value(val):
    """Convert numpy scalars/arrays, tuples and non-finite floats into JSON-safe values."""
    if isinstance(val, dict):
        return {str(k): safe_value(v) for k, v in val.items()}
    if isinstance(val, (list, tuple, set, frozenset)):
        items = sorted(val) if isinstance(val, (set, frozenset)) else val
        return [safe_value(v) for v in items]
    if isinstance(val, np.ndarray):
        return [safe_value(v) for v in val.tolist()]
    if isinstance(val, (bool, np.bool_)):
        return bool(val)
    if isinstance(val, (int, np.integer)):
        return int(val)
    if isinstance(val, (complex, np.complexfloating)):
        if val.imag == 0:
            return safe_value(float(val.real))
        return {"re": safe_value(float(val.real)), "im": safe_value(float(val.imag))}
    if isinstance(val, (float, np.floating)):
        val = float(val)
        if math.isnan(val):
            return "nan"
        if math.isinf(val):
            return "inf" if val > 0 else "-inf"
        return val
    if val is None or isinstance(val, str):
        return val
    if hasattr(val, "to_dict"):
        return safe_value(val.to_dict())
    return str(val)


def dump_json(data):
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(safe_value(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temp file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


class Timer:
    """Simple timer for performance measurement."""

    def __init__(self, name="Operation", verbose=False):
        self.name = name
        self.verbose = verbose
        self.start_time = None
        self.elapsed_ms = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, *args):
        elapsed = time.perf_counter() - self.start_time
        self.elapsed_ms = elapsed * 1000.0
        if self.verbose:
            status("ok", f"{self.name} completed in {elapsed:.2f} seconds")
