"""Deterministic CSV artifacts: '#' metadata, fixed header, 17-digit doubles."""

from __future__ import annotations

import csv
import io
import math

from .errors import MirrorCorrError

HEADER = ("x", "value", "abs_err", "status")


def format_float(v: float) -> str:
    return f"{v:.17g}"


def write_rows(path, rows, metadata=None) -> None:
    """Write the sweep CSV.

    ``rows`` is an iterable of (x, value, abs_err, status) where value and
    abs_err may be None on failed points; the status token then records
    why.  LF endings and '%.17g' floats make re-runs byte-identical.
    """
    buf = io.StringIO()
    for key, val in (metadata or {}).items():
        buf.write(f"# {key} = {val}\n")
    buf.write(",".join(HEADER) + "\n")
    for x, value, abs_err, status in rows:
        if value is not None and not math.isfinite(value):
            value, status = None, status or "non_finite"
        vs = format_float(value) if value is not None else ""
        es = format_float(abs_err) if abs_err is not None else ""
        buf.write(f"{format_float(x)},{vs},{es},{status or 'ok'}\n")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_rows(path) -> tuple[dict, list[tuple[float, float | None, float | None, str]]]:
    """Parse a sweep CSV back into (metadata, rows)."""
    metadata = {}
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    data_lines = []
    for line in lines:
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                metadata[key.strip()] = val.strip()
            continue
        if line.strip():
            data_lines.append(line)
    if not data_lines or tuple(data_lines[0].split(",")) != HEADER:
        raise MirrorCorrError(f"malformed CSV {path}: missing header {','.join(HEADER)}")
    for rec in csv.reader(data_lines[1:]):
        if len(rec) != 4:
            raise MirrorCorrError(f"malformed CSV row in {path}: {rec!r}")
        x = float(rec[0])
        value = float(rec[1]) if rec[1] else None
        abs_err = float(rec[2]) if rec[2] else None
        rows.append((x, value, abs_err, rec[3]))
    return metadata, rows
