"""Row rendering for CSV, JSON lines and a short human-readable form."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

FORMATS = ("csv", "jsonl", "text")


def _num(x, digits: int) -> str:
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return format(x, f".{digits}g")
    return str(x)


def _json_value(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, int):
        return str(x)
    return json.dumps(x)


def render(rows: Sequence[dict], fmt: str) -> str:
    """Render rows that all share the same keys."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    if not rows:
        return ""
    fields = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for row in rows:
            w.writerow(["" if row[k] is None else _num(row[k], 17) for k in fields])
        return buf.getvalue()
    if fmt == "jsonl":
        lines = ("{" + ", ".join(f"{json.dumps(k)}: {_json_value(row[k])}" for k in fields) + "}"
                 for row in rows)
        return "\n".join(lines) + "\n"
    width = max(len(k) for k in fields)
    blocks = ("\n".join(f"{k:<{width}}  {_num(row[k], 4)}" for k in fields if row[k] is not None)
              for row in rows)
    return "\n\n".join(blocks) + "\n"


def parse_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def parse_jsonl(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def iter_rows(fields: Iterable[str], values: Iterable[Sequence]) -> list[dict]:
    fields = list(fields)
    return [dict(zip(fields, v)) for v in values]
