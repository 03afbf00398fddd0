"""CSV and JSON serialization.

Floats are written with 17 significant digits so they parse back to the
identical double.  CSV files carry a header row and LF line endings.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

BRANCH_FIELDS = ("x_left", "x_right", "a", "b", "jump_right")
PDF_FIELDS = ("y_left", "y_right", "density")
BENCH_FIELDS = ("N", "algo", "seconds")
ERROR_FIELDS = ("q", "max_error")
CONVERGENT_FIELDS = ("n", "digit", "p", "q", "mu")


def fmt(value) -> str:
    """Text form of a cell: ints as ints, floats with 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(value)


def _json_number(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return float(format(v, ".17g")) if math.isfinite(v) else None
    return value


def write_csv(fields, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def records(fields, rows):
    return [{k: _json_number(v) for k, v in zip(fields, row)} for row in rows]


def write_json(payload) -> str:
    return json.dumps(payload, indent=1, sort_keys=False) + "\n"


def write_jsonl(fields, rows) -> str:
    return "".join(json.dumps(rec) + "\n" for rec in records(fields, rows))


def _cell(text):
    t = text.strip()
    if t in ("true", "false"):
        return t == "true"
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        return t


def read_csv(text: str):
    """Parse CSV text into ``(header, rows)`` with typed cells."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    rows = [tuple(_cell(c) for c in row) for row in reader if row]
    return header, rows


def branches_csv(branches) -> str:
    return write_csv(BRANCH_FIELDS, branches.rows())


def branches_json(branches) -> str:
    return write_json({
        "n_terms": branches.n_terms,
        "rho": _json_number(branches.rho.value) if branches.rho is not None else None,
        "n_branches": branches.n_branches,
        "branches": records(BRANCH_FIELDS, branches.rows()),
    })


def pdf_csv(pdf) -> str:
    return write_csv(PDF_FIELDS, pdf.rows())


def pdf_json(pdf) -> str:
    return write_json({
        "n_terms": pdf.n_terms,
        "n_bins": pdf.n_bins,
        "bins": records(PDF_FIELDS, pdf.rows()),
    })


def stats_rows(rows):
    from rotdisc.stats import STATS_FIELDS
    return STATS_FIELDS, [tuple(r.as_record()[k] for k in STATS_FIELDS) for r in rows]


def stats_csv(rows) -> str:
    return write_csv(*stats_rows(rows))


def stats_jsonl(rows) -> str:
    return write_jsonl(*stats_rows(rows))


def convergents_json(table) -> str:
    return write_json(table.to_dict())
