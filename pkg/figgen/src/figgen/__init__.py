"""Render gate-simulation CSV outputs as publication-style figures."""

from .csvio import CsvFormatError, read_schedule, read_sweep, read_trace
from .render import render, render_schedule, render_sweep, render_sweep_grid, render_trace

__version__ = "0.1.0"

__all__ = [
    "CsvFormatError",
    "read_schedule",
    "read_sweep",
    "read_trace",
    "render",
    "render_schedule",
    "render_sweep",
    "render_sweep_grid",
    "render_trace",
]
