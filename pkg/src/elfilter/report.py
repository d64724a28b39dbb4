"""Tab-separated result tables, JSON Lines decision logs, and figures.

Every table and log starts with the config fingerprint of the run that made it.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from elfilter.harness import GRID_FIELDS, Decision, GridRow, RunResult  # noqa: E402
from elfilter.metrics import MEASURES, MetricSummary  # noqa: E402

MACRO_ID = "all"

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
    "savefig.bbox": "tight",
    "svg.hashsalt": "elfilter",
}
MEASURE_LABELS = {"precision": "Precision", "recall": "Recall", "f05": "F0.5", "t11su": "T11SU"}


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.4f}"


def write_results(out: IO[str], runs: Sequence[tuple[str, MetricSummary]], fingerprint: str) -> None:
    """One row per (run, query) plus a macro row per run, query id ``all``."""
    out.write(f"# config_fingerprint={fingerprint}\n")
    out.write("run\tquery\t" + "\t".join(MEASURES) + "\n")
    for run, summary in runs:
        for qid, m in summary.per_query.items():
            out.write(f"{run}\t{qid}\t" + "\t".join(_fmt(x) for x in m.as_tuple()) + "\n")
        out.write(f"{run}\t{MACRO_ID}\t" + "\t".join(_fmt(x) for x in summary.macro.as_tuple()) + "\n")


def read_results(lines: Iterable[str]) -> list[dict]:
    rows = []
    header = None
    for line in lines:
        if line.startswith("#") or not line.strip():
            continue
        parts = line.rstrip("\n").split("\t")
        if header is None:
            header = parts
            continue
        row = dict(zip(header, parts))
        for k in MEASURES:
            row[k] = float(row[k])
        rows.append(row)
    return rows


def write_decisions(out: IO[str], results: Iterable[RunResult], fingerprint: str, config: dict) -> None:
    out.write(json.dumps({"config_fingerprint": fingerprint, "config": config}, sort_keys=True) + "\n")
    for r in results:
        for d in r.decision_log:
            rec = {
                "query_id": r.query_id,
                "post_id": d.post_id,
                "decision": "relevant" if d.relevant else "nonrelevant",
                "grade": d.grade,
            }
            out.write(json.dumps(rec) + "\n")


def read_decisions(lines: Iterable[str]) -> tuple[dict, dict[str, list[Decision]]]:
    """Return (header, decisions grouped by query in log order)."""
    header: dict = {}
    logs: dict[str, list[Decision]] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if "config_fingerprint" in rec:
            header = rec
            continue
        try:
            d = Decision(rec["post_id"], rec["decision"] == "relevant", rec["grade"])
            logs.setdefault(rec["query_id"], []).append(d)
        except KeyError as e:
            raise ValueError(f"decision log line {lineno}: missing {e}") from e
    return header, logs


def write_grid(out: IO[str], rows: Sequence[GridRow], fingerprint: str) -> None:
    out.write(f"# config_fingerprint={fingerprint}\n")
    out.write("\t".join(GRID_FIELDS + MEASURES) + "\tbest\n")
    for row in rows:
        vals = [str(v).lower() if isinstance(v, bool) else str(v) for v in row.point.as_tuple()]
        vals += [_fmt(x) for x in row.summary.macro.as_tuple()]
        out.write("\t".join(vals) + ("\t*\n" if row.best else "\t\n"))


def plot_metrics(runs: Sequence[tuple[str, MetricSummary]], path: str, title: str | None = None) -> None:
    """Grouped bars: one group per query plus the macro average, one bar per measure."""
    with plt.rc_context(STYLE):
        n_runs = len(runs)
        fig, axes = plt.subplots(n_runs, 1, figsize=(7.0, 2.6 * n_runs), squeeze=False)
        for ax, (run, summary) in zip(axes[:, 0], runs):
            labels = list(summary.per_query) + [MACRO_ID]
            values = [m.as_tuple() for m in summary.per_query.values()] + [summary.macro.as_tuple()]
            width = 0.8 / len(MEASURES)
            for k, measure in enumerate(MEASURES):
                xs = [i + (k - (len(MEASURES) - 1) / 2) * width for i in range(len(labels))]
                ys = [0.0 if math.isnan(v[k]) else v[k] for v in values]
                ax.bar(xs, ys, width, label=MEASURE_LABELS[measure])
            ax.set_xticks(range(len(labels)))
            ax.set_xticklabels(labels, rotation=45 if len(labels) > 12 else 0, ha="right" if len(labels) > 12 else "center")
            ax.set_ylim(0, 1.05)
            ax.set_ylabel(run)
        axes[0, 0].legend(ncol=len(MEASURES), loc="lower center", bbox_to_anchor=(0.5, 1.0), frameon=False)
        if title:
            fig.suptitle(title, y=1.08)
        fig.savefig(path, metadata=_metadata(path))
        plt.close(fig)


def plot_grid(rows: Sequence[GridRow], path: str) -> None:
    """Macro F0.5 and T11SU against eta, one line per setting of the other fields."""
    series: dict[tuple, list[tuple[float, float, float]]] = {}
    for row in rows:
        p = row.point
        key = (p.method, p.alpha, p.beta, p.rho, p.min_lp, p.url_gate)
        m = row.summary.macro
        series.setdefault(key, []).append((p.eta, m.f05, m.t11su))
    with plt.rc_context(STYLE):
        fig, (ax_f, ax_t) = plt.subplots(1, 2, figsize=(8.0, 3.0), sharex=True)
        for key, pts in sorted(series.items()):
            pts.sort()
            method, alpha, beta, rho, min_lp, gate = key
            label = f"{method} a={alpha:g} b={beta:g} rho={rho:g} lp={min_lp:g}{' U' if gate else ''}"
            xs = [x for x, _, _ in pts]
            ax_f.plot(xs, [f for _, f, _ in pts], marker="o", ms=3, label=label)
            ax_t.plot(xs, [0.0 if math.isnan(t) else t for _, _, t in pts], marker="o", ms=3)
        best = next((r for r in rows if r.best), None)
        if best is not None:
            ax_f.axvline(best.point.eta, color="0.6", lw=0.8, ls="--")
        ax_f.set_xlabel("eta")
        ax_t.set_xlabel("eta")
        ax_f.set_ylabel("macro F0.5")
        ax_t.set_ylabel("macro T11SU")
        if len(series) <= 12:
            ax_f.legend(frameon=False)
        fig.savefig(path, metadata=_metadata(path))
        plt.close(fig)


def _metadata(path: str) -> dict:
    # fixed metadata keeps repeated runs byte-identical
    if path.endswith(".png"):
        return {"Software": None}
    if path.endswith(".svg"):
        return {"Date": None}
    if path.endswith(".pdf"):
        return {"CreationDate": None, "Producer": None}
    return {}
