"""Minimal SVG line charts of aggregate regret curves with +-1 std bands.

Every panel carries its data-to-pixel mapping as attributes
(``data-x0 data-xscale data-xmin data-y0 data-yscale data-ymin``) so that
plotted values can be recovered from the polyline coordinates:
``value = ymin + (y0 - y_px) / yscale``.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
PANEL_W, PANEL_H = 360, 280
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 20, 30, 45
LEGEND_H = 30
MAX_POINTS = 500


class CSVParseError(ValueError):
    pass


def read_aggregate(path) -> dict:
    """Parse one aggregate CSV into {(d, algorithm): (rounds, mean, std)}."""
    out: dict = defaultdict(lambda: ([], [], []))
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["d", "algorithm", "round", "mean", "std"]:
            raise CSVParseError(f"{path}: row 1: expected header d,algorithm,round,mean,std, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 5:
                raise CSVParseError(f"{path}: row {lineno}: expected 5 fields, got {len(row)}")
            try:
                d, algo = int(row[0]), row[1]
                t, m, s = int(row[2]), float(row[3]), float(row[4])
            except ValueError as exc:
                raise CSVParseError(f"{path}: row {lineno}: {exc}") from None
            if not (np.isfinite(m) and np.isfinite(s)) or s < 0:
                raise CSVParseError(f"{path}: row {lineno}: mean/std must be finite with std >= 0")
            r, mean, std = out[(d, algo)]
            r.append(t)
            mean.append(m)
            std.append(s)
    if not out:
        raise CSVParseError(f"{path}: no data rows")
    return {k: tuple(np.array(v) for v in vals) for k, vals in out.items()}


def _thin(n: int) -> np.ndarray:
    if n <= MAX_POINTS:
        return np.arange(n)
    idx = np.unique(np.linspace(0, n - 1, MAX_POINTS).round().astype(int))
    return idx


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return [float(v) for v in np.arange(start, hi + step * 1e-9, step)]


def render_svg(series: dict) -> str:
    dims = sorted({d for d, _ in series})
    algos = sorted({a for _, a in series})
    colour = {a: PALETTE[i % len(PALETTE)] for i, a in enumerate(algos)}
    width = PANEL_W * len(dims)
    height = PANEL_H + LEGEND_H
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for p, d in enumerate(dims):
        keys = [(d, a) for a in algos if (d, a) in series]
        rounds = np.concatenate([series[k][0] for k in keys])
        lows = np.concatenate([series[k][1] - series[k][2] for k in keys])
        highs = np.concatenate([series[k][1] + series[k][2] for k in keys])
        xmin, xmax = float(rounds.min()), float(rounds.max())
        ymin, ymax = min(0.0, float(lows.min())), float(highs.max())
        if xmax == xmin:
            xmax = xmin + 1.0
        if ymax == ymin:
            ymax = ymin + 1.0
        left = p * PANEL_W + MARGIN_L
        x0, y0 = left, PANEL_H - MARGIN_B
        xscale = (PANEL_W - MARGIN_L - MARGIN_R) / (xmax - xmin)
        yscale = (PANEL_H - MARGIN_T - MARGIN_B) / (ymax - ymin)

        def X(v):
            return x0 + (v - xmin) * xscale

        def Y(v):
            return y0 - (v - ymin) * yscale

        parts.append(
            f'<g class="panel" data-d="{d}" data-x0="{_fmt(x0)}" data-xscale="{xscale!r}" data-xmin="{xmin!r}" '
            f'data-y0="{_fmt(y0)}" data-yscale="{yscale!r}" data-ymin="{ymin!r}">'
        )
        parts.append(f'<text x="{_fmt(left + (PANEL_W - MARGIN_L - MARGIN_R) / 2)}" y="18" '
                     f'text-anchor="middle" font-size="13">d = {d}</text>')
        parts.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(X(xmax))}" y2="{_fmt(y0)}" stroke="black"/>')
        parts.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(Y(ymax))}" stroke="black"/>')
        for tv in _ticks(xmin, xmax):
            parts.append(f'<text x="{_fmt(X(tv))}" y="{_fmt(y0 + 14)}" text-anchor="middle">{tv:g}</text>')
        for tv in _ticks(ymin, ymax):
            parts.append(f'<text x="{_fmt(x0 - 4)}" y="{_fmt(Y(tv) + 4)}" text-anchor="end">{tv:g}</text>')
        parts.append(f'<text x="{_fmt(left + (PANEL_W - MARGIN_L - MARGIN_R) / 2)}" y="{_fmt(y0 + 32)}" '
                     f'text-anchor="middle">round</text>')
        parts.append(f'<text transform="translate({_fmt(p * PANEL_W + 14)},{_fmt((MARGIN_T + y0) / 2)}) rotate(-90)" '
                     f'text-anchor="middle">cumulative regret</text>')
        for k in keys:
            r, m, s = series[k]
            idx = _thin(len(r))
            r, m, s = r[idx], m[idx], s[idx]
            upper = " ".join(f"{_fmt(X(a))},{_fmt(Y(b))}" for a, b in zip(r, m + s))
            lower = " ".join(f"{_fmt(X(a))},{_fmt(Y(b))}" for a, b in zip(r[::-1], (m - s)[::-1]))
            c = colour[k[1]]
            parts.append(f'<polygon class="band" data-algorithm="{escape(k[1])}" points="{upper} {lower}" '
                         f'fill="{c}" fill-opacity="0.2" stroke="none"/>')
            line = " ".join(f"{_fmt(X(a))},{_fmt(Y(b))}" for a, b in zip(r, m))
            parts.append(f'<polyline class="mean" data-algorithm="{escape(k[1])}" data-last-round="{int(r[-1])}" '
                         f'points="{line}" fill="none" stroke="{c}" stroke-width="1.5"/>')
        parts.append("</g>")
    for i, a in enumerate(algos):
        lx = 10 + i * 110
        ly = PANEL_H + 12
        parts.append(f'<g class="legend" data-algorithm="{escape(a)}">'
                     f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{colour[a]}" stroke-width="3"/>'
                     f'<text x="{lx + 25}" y="{ly + 4}">{escape(a)}</text></g>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(csv_paths, output_path) -> Path:
    paths = list(csv_paths)
    if not paths:
        raise ValueError("at least one aggregate CSV is required")
    series = {}
    for p in paths:
        series.update(read_aggregate(p))
    out = Path(output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render_svg(series), encoding="utf-8")
    return out
