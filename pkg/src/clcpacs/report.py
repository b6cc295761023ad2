"""Figure rendering for distance reports."""

from __future__ import annotations

from pathlib import Path

from .acs import AcsReport


def render_acs_figure(report: AcsReport, path: Path | str) -> Path:
    """Bar chart of the per-subject distances, saved next to the TSV.

    Undefined distances are drawn as hatched zero-height bars so missing
    comparisons stay visible.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    names = [s.name for s in report.subjects]
    values = [0.0 if s.undefined else s.acs for s in report.subjects]
    averages_q = [s.d_query_subject for s in report.subjects]
    averages_s = [s.d_subject_query for s in report.subjects]

    fig, (ax1, ax2) = plt.subplots(
        2, 1, figsize=(max(4.0, 1.2 * len(names) + 2.0), 6.0), sharex=True
    )
    xs = range(len(names))
    bars = ax1.bar(xs, values, color="#4878a8")
    for bar, sub in zip(bars, report.subjects):
        if sub.undefined:
            bar.set_hatch("//")
            bar.set_facecolor("none")
            bar.set_edgecolor("#a84848")
    ax1.set_ylabel("distance")
    ax1.set_title(f"distances vs query {report.query_name!r} (sigma={report.sigma})")

    width = 0.38
    ax2.bar([x - width / 2 for x in xs], averages_q, width, label="query vs subject")
    ax2.bar([x + width / 2 for x in xs], averages_s, width, label="subject vs query")
    ax2.set_ylabel("average match length")
    ax2.set_xticks(list(xs))
    ax2.set_xticklabels(names, rotation=30, ha="right")
    ax2.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
