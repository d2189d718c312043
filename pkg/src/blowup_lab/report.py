"""Report serialization: versioned CSV, JSON summaries, and rendered figures.

The CSV column order is frozen and stamped in a leading comment line so
downstream plots never break silently.  Figures are a convenience render
of the same rows; the CSV stays the machine-readable contract.
"""

from __future__ import annotations

import math
from pathlib import Path

from .bounds import ScanReport

SCAN_CSV_HEADER = "# blowup-lab scan-csv v1 columns: t,density_log2,half_width,threshold_log2,satisfied"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_scan_csv(report: ScanReport, destination: str | Path) -> None:
    lines = [SCAN_CSV_HEADER]
    for row in report.rows:
        lines.append(
            f"{row.t},{_fmt(row.density_log2)},{_fmt(row.half_width)},"
            f"{_fmt(row.threshold_log2)},{'true' if row.satisfied else 'false'}"
        )
    Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8")


def scan_report_json_dict(report: ScanReport) -> dict:
    return {
        "status": report.status,
        "gamma_num": report.gamma.numerator,
        "gamma_den": report.gamma.denominator,
        "gamma_log2": "-inf" if math.isinf(report.gamma_log2) else report.gamma_log2,
        "delta": report.delta,
        "t_max": report.t_max,
        "budget": report.budget,
        "samples": report.samples,
        "seed": report.seed,
        "first_t": report.first_t,
        "rows": [
            {
                "t": row.t,
                "density_log2": "-inf" if math.isinf(row.density_log2) else row.density_log2,
                "half_width": row.half_width,
                "threshold_log2": row.threshold_log2,
                "satisfied": row.satisfied,
                "mode": row.mode,
            }
            for row in report.rows
        ],
    }


def render_scan_figure(report: ScanReport, destination: str | Path) -> None:
    """Render density vs threshold per t to an image file (Agg backend)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ts = [row.t for row in report.rows]
    finite = [row for row in report.rows if not math.isinf(row.density_log2)]
    ax.plot(
        [row.t for row in finite],
        [row.density_log2 for row in finite],
        "o-",
        color="tab:blue",
        label="measured log2 density",
    )
    sampled = [row for row in report.rows if row.mode == "sample" and row.half_width > 0]
    lower_pts = []
    for row in sampled:
        lower = 2.0**row.density_log2 - row.half_width if not math.isinf(row.density_log2) else 0.0
        if lower > 0:
            lower_pts.append((row.t, math.log2(lower)))
    if lower_pts:
        ax.plot(
            [t for t, _ in lower_pts],
            [y for _, y in lower_pts],
            "_",
            markersize=12,
            color="tab:blue",
            label="99% lower edge",
        )
    ax.plot(
        ts,
        [row.threshold_log2 for row in report.rows],
        "s--",
        color="tab:red",
        label="threshold log2",
    )
    if report.first_t is not None:
        ax.axvline(report.first_t, color="gray", linestyle=":", linewidth=1)
    ax.set_xlabel("t (balanced blowup size)")
    ax.set_ylabel("log2 density")
    ax.set_title(f"blowup density scan (delta={report.delta}, gamma_log2={report.gamma_log2:.3f})")
    ax.legend(loc="best", fontsize=8)
    if ts:
        ax.set_xticks(ts)
    fig.tight_layout()
    fig.savefig(destination, dpi=150)
    plt.close(fig)
