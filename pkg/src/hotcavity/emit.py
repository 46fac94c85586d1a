"""CSV and JSON writers. Output is byte-stable for identical input."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .analytic import PulseShape

WAVEFORM_COLUMNS = ("t", "Re", "Im", "abs", "phase")


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _clean(obj):
    """Plain JSON types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _open(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def waveform_rows(pulse: PulseShape) -> np.ndarray:
    """t, Re f, Im f, |f|, arg(f)/(pi/2)."""
    f = pulse.values
    return np.column_stack([pulse.times, f.real, f.imag, np.abs(f), np.angle(f) / (np.pi / 2)])


def write_table(path, columns, rows) -> Path:
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    return Path(path)


def write_waveform(path, pulse: PulseShape) -> Path:
    return write_table(path, WAVEFORM_COLUMNS, waveform_rows(pulse))


def dumps(doc) -> str:
    return json.dumps(_clean(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, doc) -> Path:
    with _open(path) as fh:
        fh.write(dumps(doc))
    return Path(path)


def read_table(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def emit_report(report, directory, prefix: str | None = None) -> list[Path]:
    """Report JSON, one waveform pair per run and one CSV per table."""
    directory = Path(directory)
    prefix = prefix or report.config["scenario"]
    paths = [write_json(directory / f"{prefix}_report.json", report.to_json())]
    for run in report.runs:
        paths.append(write_waveform(directory / f"{prefix}_{run.label}_real.csv", run.f_real))
        paths.append(write_waveform(directory / f"{prefix}_{run.label}_ideal.csv", run.f_id))
    for name, table in report.tables.items():
        paths.append(write_table(directory / f"{prefix}_{name}.csv", table["columns"], table["rows"]))
    return paths
