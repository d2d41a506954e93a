"""Plain-text outputs: CSV curves and line-oriented result records.

Every file starts with ``#`` metadata lines echoing the run configuration.
Floats are written with 17 significant digits so they read back bit-exact.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return "%.17g" % value
    return str(value)


def metadata_lines(meta: dict) -> list[str]:
    return [f"# {key}={fmt(value)}" for key, value in meta.items()]


def write_csv(path, header: list[str], rows, meta: dict | None = None) -> None:
    buf = io.StringIO()
    for line in metadata_lines(meta or {}):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> tuple[dict, list[str], list[list[str]]]:
    """Inverse of :func:`write_csv`; returns ``(meta, header, rows)`` with raw strings."""
    meta, body = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line:
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]


def scan_rows(scan):
    for s in scan.samples:
        yield (s.E, s.epsilon, s.depsilon_dE, s.solve_ok)


SCAN_HEADER = ["E", "epsilon", "depsilon_dE", "solve_ok"]
PSEUDO_HEADER = ["omega", "epsilon", "solve_ok"]
PARAM_HEADER = ["beta", "epsilon"]
PSI_HEADER = ["x", "psi"]


def record(**fields) -> str:
    """``key=value`` pairs separated by single spaces."""
    return " ".join(f"{key}={fmt(value)}" for key, value in fields.items())


def eigenvalue_record(ev) -> str:
    return record(energy=ev.energy, parity=ev.parity, residual=ev.residual, stationarity=ev.stationarity)


def parse_record(line: str) -> dict:
    out = {}
    for token in line.split():
        key, _, value = token.partition("=")
        out[key] = value
    return out
