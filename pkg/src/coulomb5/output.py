"""Deterministic CSV/JSON table writers.

Floats are written with ``repr`` so a table round-trips exactly and two runs
with the same configuration produce byte-identical files.
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "numerator") and hasattr(v, "denominator") and not isinstance(v, (int, bool)):
        return float(v)
    return v


def metadata_line(command: str, meta: dict) -> str:
    return f"# coulomb5 {command} " + json.dumps(meta, sort_keys=True, default=str)


def render_csv(command: str, meta: dict, columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    buf.write(metadata_line(command, meta) + "\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def render_json(command: str, meta: dict, columns: Sequence[str], rows: Iterable[dict]) -> str:
    doc = {"command": command, "meta": meta, "columns": list(columns),
           "rows": [{c: _json_safe(row[c]) for c in columns} for row in rows]}
    return json.dumps(doc, indent=1, sort_keys=False, default=str, allow_nan=False) + "\n"


def render(fmt: str, command: str, meta: dict, columns: Sequence[str], rows: list[dict]) -> str:
    if fmt == "csv":
        return render_csv(command, meta, columns, rows)
    if fmt == "json":
        return render_json(command, meta, columns, rows)
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(path: str | Path) -> tuple[str, list[str], list[list[str]]]:
    """(metadata line, header, data rows) of a file written by ``render_csv``."""
    lines = Path(path).read_text().splitlines()
    meta = lines[0]
    header = lines[1].split(",")
    return meta, header, [ln.split(",") for ln in lines[2:]]
