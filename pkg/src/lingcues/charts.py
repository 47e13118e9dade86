"""Grouped-bar SVG charts: datasets on the x axis, one bar per classifier."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .classifiers import ClassifierKind
from .evaluation import ComparisonTable
from .features import FSet

PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7")
METRIC_LABELS = {"auc_pr": "PR-AUC", "f1": "F1"}


def grouped_bar_svg(table: ComparisonTable, metric: str, fset, width: int = 720, height: int = 420) -> str:
    fset = FSet(fset)
    datasets = table.datasets
    kinds = [k for k in ClassifierKind if any(r.classifier is k and r.fset is fset for r in table)]
    left, right, top, bottom = 60, 170, 40, 60
    plot_w, plot_h = width - left - right, height - top - bottom
    group_w = plot_w / max(1, len(datasets))
    bar_w = group_w * 0.8 / max(1, len(kinds))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<title>{escape(METRIC_LABELS.get(metric, metric))} on {fset.value}</title>',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + plot_w / 2:.1f}" y="22" text-anchor="middle" font-size="15">'
        f'{escape(METRIC_LABELS.get(metric, metric))} by classifier ({fset.value})</text>',
    ]
    for i in range(6):
        v = i / 5
        y = top + plot_h * (1 - v)
        out.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + plot_w}" y2="{y:.1f}" stroke="#dddddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">{v:.1f}</text>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>')

    for di, ds in enumerate(datasets):
        x0 = left + di * group_w + group_w * 0.1
        for ki, kind in enumerate(kinds):
            try:
                value = getattr(table.cell(ds, fset, kind), metric)
            except KeyError:
                continue
            if value is None or math.isnan(value):
                continue
            h = plot_h * min(max(value, 0.0), 1.0)
            x = x0 + ki * bar_w
            out.append(f'<rect x="{x:.1f}" y="{top + plot_h - h:.1f}" width="{bar_w:.1f}" height="{h:.1f}" '
                       f'fill="{PALETTE[ki % len(PALETTE)]}"><title>{escape(ds)} / {kind.value}: {value:.4f}'
                       f'</title></rect>')
        out.append(f'<text x="{left + (di + 0.5) * group_w:.1f}" y="{top + plot_h + 20}" '
                   f'text-anchor="middle">{escape(ds)}</text>')

    for ki, kind in enumerate(kinds):
        y = top + 10 + ki * 20
        out.append(f'<rect x="{left + plot_w + 16}" y="{y}" width="12" height="12" '
                   f'fill="{PALETTE[ki % len(PALETTE)]}"/>')
        out.append(f'<text x="{left + plot_w + 34}" y="{y + 10}">{escape(kind.value)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def chart_set(table: ComparisonTable, metrics=("auc_pr", "f1"), fsets=(FSet.FSET1, FSet.FSET2)) -> dict[str, str]:
    """File name -> SVG text, one chart per (metric, fset)."""
    return {f"{m}_{FSet(f).value}.svg": grouped_bar_svg(table, m, f) for m in metrics for f in fsets}
