"""Report records and their json-lines / csv encodings.

A record is a flat dict with the keys in ``FIELDS``. Floats are written with
17 significant digits so that both encodings re-parse to identical records.
"""

import csv
import io
import json
import math

import numpy as np

FIELDS = ("check", "command", "passed", "value", "tolerance", "error", "note", "inputs", "seed")


def make_record(check, command, *, passed, value=None, tolerance=None, error=None, note=None, inputs=None, seed=0):
    return {
        "check": check,
        "command": command,
        "passed": bool(passed),
        "value": to_plain(value),
        "tolerance": to_plain(tolerance),
        "error": error,
        "note": note,
        "inputs": to_plain(inputs if inputs is not None else {}),
        "seed": int(seed),
    }


def to_plain(obj):
    """Convert numpy scalars/arrays (recursively) to builtin types."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _float_text(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj) -> str:
    """Compact JSON with sorted keys and 17-significant-digit floats."""
    if isinstance(obj, (np.generic, np.ndarray)):
        obj = to_plain(obj)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float_text(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(json.dumps(str(k)) + ":" + dumps(obj[k]) for k in sorted(obj)) + "}"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def to_json_lines(records) -> str:
    return "".join(dumps(r) + "\n" for r in records)


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in records:
        w.writerow([dumps(r.get(k)) for k in FIELDS])
    return buf.getvalue()


def encode(records, fmt: str) -> str:
    if fmt == "json-lines":
        return to_json_lines(records)
    if fmt == "csv":
        return to_csv(records)
    raise ValueError(f"unknown format {fmt!r}")


def decode(text: str, fmt: str):
    if fmt == "json-lines":
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != FIELDS:
            raise ValueError("csv header does not match the record schema")
        return [{k: json.loads(cell) for k, cell in zip(FIELDS, row)} for row in rows[1:]]
    raise ValueError(f"unknown format {fmt!r}")
