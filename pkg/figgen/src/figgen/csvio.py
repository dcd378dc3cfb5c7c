"""Strict readers for the simulator's CSV outputs.

Each reader checks the exact header its producer writes and reports
malformed content with the file path and 1-based line number.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

TRACE_HEADER = "t_us,p0,p1,p2,p3,fidelity"
SCHEDULE_HEADER = "t_us,alpha_rad,beta_rad"
SWEEP_HEADER = "T_us,fidelity,leakage"


class CsvFormatError(ValueError):
    """Input CSV is missing, has the wrong header, or has a bad row."""


def _read_table(path: str | Path, header: str) -> np.ndarray:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise CsvFormatError(f"{p}: cannot read ({e})") from e
    lines = text.splitlines()
    if not lines:
        raise CsvFormatError(f"{p}: line 1: empty file, expected header {header!r}")
    if lines[0].strip() != header:
        raise CsvFormatError(f"{p}: line 1: expected header {header!r}, got {lines[0]!r}")
    ncols = header.count(",") + 1
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != ncols:
            raise CsvFormatError(f"{p}: line {i}: expected {ncols} columns, got {len(cells)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as e:
            raise CsvFormatError(f"{p}: line {i}: {e}") from e
    if not rows:
        raise CsvFormatError(f"{p}: line 2: no data rows")
    return np.asarray(rows)


def read_trace(path: str | Path) -> np.ndarray:
    """Columns (t_us, p0, p1, p2, p3, fidelity)."""
    return _read_table(path, TRACE_HEADER)


def read_schedule(path: str | Path) -> np.ndarray:
    """Columns (t_us, alpha_rad, beta_rad)."""
    return _read_table(path, SCHEDULE_HEADER)


def read_sweep(path: str | Path) -> np.ndarray:
    """Columns (T_us, fidelity, leakage)."""
    return _read_table(path, SWEEP_HEADER)
