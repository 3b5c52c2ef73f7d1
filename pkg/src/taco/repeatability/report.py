"""Plots and machine-readable summaries of repeatability analyses."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .analyze import RepeatabilityReport

SUMMARY_COLUMNS = ("sensor", "response_time_mean", "response_time_std", "std", "n_excluded")


def emit_curves(reports: RepeatabilityReport | list[RepeatabilityReport], out_dir) -> list[Path]:
    """One mean-curve plot per sensor plus a session summary table.

    Returns every file written (PNGs, summary.csv, summary.json).
    """
    if isinstance(reports, RepeatabilityReport):
        reports = [reports]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    for rep in reports:
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.plot(rep.curve_times, rep.mean_curve, lw=1.2, label="mean")
        ax.fill_between(
            rep.curve_times,
            (rep.mean_curve - rep.std_curve).clip(0, 1),
            (rep.mean_curve + rep.std_curve).clip(0, 1),
            alpha=0.3,
            label="±1 std",
        )
        ax.set_xlabel("time since press onset (s)")
        ax.set_ylabel("normalized reading")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title(
            f"{rep.sensor_name}: response "
            f"{rep.response_time_mean_s:.3f}±{rep.response_time_std_s:.3f} s, "
            f"std {rep.episode_std:.3f}"
        )
        ax.legend(loc="lower right", fontsize=8)
        fig.tight_layout()
        path = out_dir / f"{rep.sensor_name}_curve.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    rows = [rep.summary_row() for rep in reports]
    csv_path = out_dir / "summary.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    written.append(csv_path)

    json_path = out_dir / "summary.json"
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(rows, f, indent=2)
    written.append(json_path)
    return written
