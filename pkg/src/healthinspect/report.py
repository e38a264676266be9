"""Report files: method summary table, per-fold metrics and topic table."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Mapping, Sequence

from .evaluation import METRIC_NAMES, MetricsSummary, format_cell
from .lda import format_topics
from .pipeline import METHODS, FoldResult


class ReportError(OSError):
    pass


def _fmt(value) -> str:
    return "undefined" if value is None else repr(float(value))


def summary_rows(summaries: Mapping[str, MetricsSummary]) -> list[list[str]]:
    rows = []
    for key, s in summaries.items():
        rows.append([key, METHODS[key].title] +
                    [format_cell(s.mean[m], s.sd[m]) for m in METRIC_NAMES])
    return rows


def render_summary_csv(summaries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "title", *METRIC_NAMES])
    writer.writerows(summary_rows(summaries))
    return buf.getvalue()


def render_summary_text(summaries) -> str:
    header = ["", *METRIC_NAMES]
    body = [[row[1], *row[2:]] for row in summary_rows(summaries)]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = []
    for r in [header, *body]:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def render_folds_csv(folds: Sequence[FoldResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["fold", "method", *METRIC_NAMES])
    for r in sorted(folds, key=lambda r: (r.fold, list(METHODS).index(r.method))):
        writer.writerow([r.fold, r.method, *(_fmt(getattr(r.metrics, m)) for m in METRIC_NAMES)])
    return buf.getvalue()


def emit_report(summaries: Mapping[str, MetricsSummary], topics: list[list[str]] | None,
                out_dir, folds: Sequence[FoldResult] | None = None) -> list[Path]:
    """Write summary.csv, summary.txt, and optionally topics.txt and folds.csv."""
    if not summaries:
        raise ValueError("no summaries to report")
    files = {
        "summary.csv": render_summary_csv(summaries),
        "summary.txt": render_summary_text(summaries),
    }
    if topics is not None:
        files["topics.txt"] = format_topics(topics)
    if folds is not None:
        files["folds.csv"] = render_folds_csv(folds)

    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            path = out / name
            path.write_text(text, encoding="utf-8", newline="\n")
            written.append(path)
    except OSError as exc:
        raise ReportError(f"cannot write report to {out}: {exc.strerror or exc}") from None
    return written
