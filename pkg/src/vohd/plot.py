"""Hand-written SVG line charts for comparison tables.

Two panels are drawn from a CSV table: the value curves (``exact``,
``oracle``, ``approx_N*``) and, when error columns exist, the errors on a
log10 axis. Output is byte-stable for a given input.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from vohd.errors import VohdError

__all__ = ["PlotError", "emit_plot", "read_table", "render_panels"]

WIDTH, HEIGHT = 800, 600
LEFT, RIGHT, TOP, BOTTOM = 90, 170, 50, 70
COLORS = ("#000000", "#7f7f7f", "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
DASHES = {"exact": "", "oracle": "6 3"}
LOG_FLOOR = 1e-18


class PlotError(VohdError, ValueError):
    """The CSV table cannot be plotted."""


def read_table(text: str) -> tuple[list[str], list[list[float]]]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise PlotError("empty CSV document") from None
    if not header or header[0] != "t":
        raise PlotError("CSV header must start with 't'")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise PlotError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            rows.append([float(v) if v != "" else math.nan for v in row])
        except ValueError as exc:
            raise PlotError(f"line {lineno}: {exc}") from None
    if not rows:
        raise PlotError("no data rows")
    return header, rows


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.4g}"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12) + 0.0)
        v += step
    return ticks


def _chart(title: str, t: list[float], series: list[tuple[str, list[float]]],
           log: bool, y_label: str) -> str:
    xs_all = [v for v in t if math.isfinite(v)]
    x_lo, x_hi = min(xs_all), max(xs_all)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5

    def transform(v: float) -> float:
        if not math.isfinite(v):
            return math.nan
        return math.log10(max(abs(v), LOG_FLOOR)) if log else v

    ys = [transform(v) for _, values in series for v in values]
    ys = [v for v in ys if math.isfinite(v)]
    if not ys:
        raise PlotError(f"{title}: nothing finite to plot")
    y_lo, y_hi = min(ys), max(ys)
    if log:
        y_lo, y_hi = math.floor(y_lo), math.ceil(y_hi)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.0 if log else 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def px(x: float) -> float:
        return LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y: float) -> float:
        return TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{_escape(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#000000"/>',
    ]
    for xt in _nice_ticks(x_lo, x_hi):
        x = px(xt)
        out.append(f'<line x1="{_fmt(x)}" y1="{TOP + ph}" x2="{_fmt(x)}" y2="{TOP + ph + 6}" '
                   'stroke="#000000"/>')
        out.append(f'<text x="{_fmt(x)}" y="{TOP + ph + 22}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{_tick_label(xt)}</text>')
    y_ticks = [float(v) for v in range(int(y_lo), int(y_hi) + 1)] if log else _nice_ticks(y_lo, y_hi)
    if log and len(y_ticks) > 10:
        stride = math.ceil(len(y_ticks) / 8)
        y_ticks = y_ticks[::stride]
    for yt in y_ticks:
        y = py(yt)
        label = f"1e{int(yt)}" if log else _tick_label(yt)
        out.append(f'<line x1="{LEFT - 6}" y1="{_fmt(y)}" x2="{LEFT}" y2="{_fmt(y)}" stroke="#000000"/>')
        out.append(f'<line x1="{LEFT}" y1="{_fmt(y)}" x2="{LEFT + pw}" y2="{_fmt(y)}" '
                   'stroke="#e0e0e0"/>')
        out.append(f'<text x="{LEFT - 10}" y="{_fmt(y + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="12">{label}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" '
               'font-family="sans-serif" font-size="14">t</text>')
    out.append(f'<text x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="14" transform="rotate(-90 20 {TOP + ph / 2:.1f})">{_escape(y_label)}</text>')

    for i, (name, values) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        points = [f"{_fmt(px(x))},{_fmt(py(transform(v)))}"
                  for x, v in zip(t, values) if math.isfinite(x) and math.isfinite(transform(v))]
        dash = DASHES.get(name, "")
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline id="series-{_escape(name)}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"{dash_attr} points="{" ".join(points)}"/>')
        ly = TOP + 10 + 20 * i
        lx = LEFT + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.5"{dash_attr}/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="12">{_escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def render_panels(text: str, title: str = "") -> dict[str, str]:
    """SVG documents keyed by panel name (``values`` and maybe ``errors``)."""
    header, rows = read_table(text)
    columns = {name: [row[i] for row in rows] for i, name in enumerate(header)}
    t = columns["t"]
    value_names = [h for h in header if h in ("exact", "oracle") or h.startswith("approx_N")]
    error_names = [h for h in header if h.startswith("err_")]
    if not value_names:
        raise PlotError("CSV has no value columns to plot")
    prefix = f"{title}: " if title else ""
    panels = {"values": _chart(f"{prefix}values", t, [(n, columns[n]) for n in value_names],
                               log=False, y_label="derivative")}
    if error_names:
        panels["errors"] = _chart(f"{prefix}absolute error", t,
                                  [(n, columns[n]) for n in error_names],
                                  log=True, y_label="log10 |error|")
    return panels


def emit_plot(text: str, out_path: str | Path, title: str = "") -> list[Path]:
    """Write ``<stem>_values.svg`` (and ``<stem>_errors.svg``) next to ``out_path``."""
    out_path = Path(out_path)
    stem = out_path.with_suffix("") if out_path.suffix in (".csv", ".svg") else out_path
    written = []
    for panel, svg in render_panels(text, title).items():
        path = stem.parent / f"{stem.name}_{panel}.svg"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(svg, encoding="utf-8")
        written.append(path)
    return written
