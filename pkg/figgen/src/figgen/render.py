"""Figure builders for the four CSV-backed plot kinds."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless, deterministic output
import matplotlib.pyplot as plt
import numpy as np

from .csvio import CsvFormatError, read_schedule, read_sweep, read_trace

KINDS = ("schedule", "trace", "sweep", "sweep-grid")


def _save(fig, out: str | Path) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if out.suffix.lower() == ".svg" else None
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)
    return out


def render_schedule(csv_path: str | Path, out: str | Path, title: str | None = None) -> Path:
    data = read_schedule(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(data[:, 0], data[:, 2], color="black", label=r"$\beta$")
    ax.plot(data[:, 0], data[:, 1], color="tab:blue", label=r"$\alpha$")
    ax.set_xlabel(r"time ($\mu$s)")
    ax.set_ylabel("angle (rad)")
    ax.set_yticks([0, np.pi / 4, np.pi / 2])
    ax.set_yticklabels(["0", r"$\pi/4$", r"$\pi/2$"])
    ax.legend(loc="center right")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, out)


def render_trace(csv_path: str | Path, out: str | Path, title: str | None = None) -> Path:
    data = read_trace(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(data[:, 0], data[:, 2], color="black", label=r"$p_1$")
    ax.plot(data[:, 0], data[:, 3], color="tab:blue", label=r"$p_2$")
    ax.set_xlabel(r"time ($\mu$s)")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="center left")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, out)


def _sweep_panel(ax, data, label=None):
    fid = np.clip(data[:, 1], 0.0, 1.0)
    order = np.argsort(data[:, 0])
    ax.plot(data[order, 0], fid[order], marker="o", ms=2.5, lw=1.0, label=label)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel(r"gate time ($\mu$s)")
    ax.set_ylabel("fidelity")


def render_sweep(csv_paths, out: str | Path, title: str | None = None) -> Path:
    paths = [csv_paths] if isinstance(csv_paths, (str, Path)) else list(csv_paths)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for p in paths:
        label = Path(p).stem if len(paths) > 1 else None
        _sweep_panel(ax, read_sweep(p), label=label)
    if len(paths) > 1:
        ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, out)


def render_sweep_grid(csv_paths, out: str | Path, title: str | None = None) -> Path:
    paths = list(csv_paths)
    if len(paths) != 4:
        raise CsvFormatError(f"sweep-grid needs exactly 4 CSVs, got {len(paths)}")
    fig, axes = plt.subplots(2, 2, figsize=(8.0, 5.6), sharex=True, sharey=True)
    for ax, p, tag in zip(axes.flat, paths, "abcd"):
        _sweep_panel(ax, read_sweep(p))
        ax.set_title(f"({tag}) {Path(p).stem}", fontsize=10)
        ax.label_outer()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, out)


def render(kind: str, csv_paths, out: str | Path, title: str | None = None) -> Path:
    if kind == "schedule":
        (path,) = csv_paths
        return render_schedule(path, out, title)
    if kind == "trace":
        (path,) = csv_paths
        return render_trace(path, out, title)
    if kind == "sweep":
        return render_sweep(csv_paths, out, title)
    if kind == "sweep-grid":
        return render_sweep_grid(csv_paths, out, title)
    raise CsvFormatError(f"unknown figure kind {kind!r}; expected one of {KINDS}")
