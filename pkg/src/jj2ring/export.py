"""CSV/JSON writers with byte-stable float formatting.

Every JSON document carries ``command``, ``params`` and a ``table`` with
``columns`` and ``rows``; the table is what ``--replot`` turns back into CSV.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Sequence, TextIO

import numpy as np


def fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def _plain(x: Any) -> Any:
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def table_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def document(command: str, params: dict, columns: Sequence[str], rows, **extra) -> dict:
    doc = {
        "command": command,
        "params": _plain(params),
        "table": {"columns": list(columns), "rows": _plain([list(r) for r in rows])},
    }
    doc.update(_plain(extra))
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def render(doc: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        return dumps(doc)
    if fmt_name == "csv":
        return table_csv(doc["table"]["columns"], doc["table"]["rows"])
    raise ValueError(f"unknown format {fmt_name!r}")


def load(fh: TextIO) -> dict:
    doc = json.load(fh)
    if not isinstance(doc, dict) or "table" not in doc:
        raise ValueError("not a jj2ring JSON document (missing 'table')")
    table = doc["table"]
    if not isinstance(table.get("columns"), list) or not isinstance(table.get("rows"), list):
        raise ValueError("malformed table: expected 'columns' and 'rows' lists")
    width = len(table["columns"])
    for k, row in enumerate(table["rows"]):
        if len(row) != width:
            raise ValueError(f"row {k} has {len(row)} fields, expected {width}")
    return doc
