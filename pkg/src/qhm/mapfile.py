"""Plain-text map files and report serialisation.

MapFile layout::

    # optional comment lines
    qhm <m> <n>
    <m lines of m entries>     # component 1
    ...                        # components 2..n

Entries are integers, ``p/q`` rationals (exact) or decimals (float).  Blank
lines and ``#`` comments may appear anywhere.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .core import ParseError, QuadraticMap, format_scalar, to_scalar

MAGIC = "qhm"


class MapFileError(ParseError):
    pass


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_mapfile(text: str) -> QuadraticMap:
    lines = list(_content_lines(text))
    if not lines:
        raise MapFileError("empty map file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != MAGIC:
        raise MapFileError(f"line {lineno}: expected header 'qhm <m> <n>', got {header!r}")
    try:
        m, n = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise MapFileError(f"line {lineno}: dimensions must be integers") from exc
    if m < 1 or n < 1:
        raise MapFileError(f"line {lineno}: dimensions must be positive")
    rows = lines[1:]
    if len(rows) != m * n:
        raise MapFileError(f"expected {n} blocks of {m} rows ({m * n} rows), found {len(rows)}")
    entries = []
    for lineno, line in rows:
        tokens = line.split()
        if len(tokens) != m:
            raise MapFileError(f"line {lineno}: expected {m} entries, found {len(tokens)}")
        try:
            entries.append([to_scalar(tok) for tok in tokens])
        except (ParseError, ValueError) as exc:
            raise MapFileError(f"line {lineno}: {exc}") from exc
    blocks = [entries[i * m : (i + 1) * m] for i in range(n)]
    try:
        return QuadraticMap.from_arrays(blocks)
    except ValueError as exc:
        raise MapFileError(str(exc)) from exc


def format_mapfile(qmap: QuadraticMap, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{MAGIC} {qmap.m} {qmap.n}")
    for i, a in enumerate(qmap.arrays, start=1):
        out.append(f"# A_{i}")
        for row in a.tolist():
            out.append(" ".join(format_scalar(v) for v in row))
    return "\n".join(out) + "\n"


def read_mapfile(path: str) -> QuadraticMap:
    with open(path, encoding="utf-8") as fh:
        return parse_mapfile(fh.read())


def write_mapfile(qmap: QuadraticMap, path: str, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_mapfile(qmap, comment))


# -- reports ---------------------------------------------------------------


def jsonable(value):
    """Convert report values to JSON types; exact rationals become "p/q" strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def report_json(report: dict) -> str:
    """One-line JSON object."""
    return json.dumps(jsonable(report), separators=(",", ":"))


def parse_report_json(line: str) -> dict:
    """Inverse of :func:`report_json`; "p/q" strings are turned back into Fractions."""

    def restore(v):
        if isinstance(v, str) and "/" in v:
            try:
                return to_scalar(v)
            except (ParseError, ValueError):
                return v
        if isinstance(v, list):
            return [restore(x) for x in v]
        if isinstance(v, dict):
            return {k: restore(x) for k, x in v.items()}
        return v

    return restore(json.loads(line))


def _text_value(v) -> str:
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if isinstance(v, (int, Fraction, float, np.integer, np.floating)):
        return format_scalar(v.item() if isinstance(v, np.generic) else v)
    return str(v)


def report_text(report: dict) -> str:
    """Human-readable ``key: value`` lines."""
    return "\n".join(f"{key}: {_text_value(value)}" for key, value in report.items())
