"""Minimal hand-rolled SVG line plots for sweep CSVs (no plotting dependency)."""

from __future__ import annotations

import math

from .errors import MirrorCorrError

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 40, 50  # margins


def _ticks(lo: float, hi: float, log: bool, n: int = 5) -> list[float]:
    if log:
        e0, e1 = math.ceil(math.log10(lo) - 1e-9), math.floor(math.log10(hi) + 1e-9)
        vals = [10.0**e for e in range(e0, e1 + 1)]
        return vals or [lo, hi]
    span = hi - lo
    if span <= 0:
        return [lo]
    step = 10 ** math.floor(math.log10(span / n))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= n:
            step *= mult
            break
    t0 = math.ceil(lo / step) * step
    out = []
    t = t0
    while t <= hi + 1e-12 * abs(span):
        out.append(t)
        t += step
    return out


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def render_plot(points, out_path, axes: str = "linear", title: str = "") -> None:
    """Write a self-contained SVG polyline plot of (x, y) points.

    ``axes`` is "linear" or "loglog"; loglog requires strictly positive
    data (|y| is plotted when y is negative throughout, noted in the
    axis label).
    """
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise MirrorCorrError("no data points to plot")
    if axes not in ("linear", "loglog"):
        raise MirrorCorrError(f"axes must be 'linear' or 'loglog', got {axes!r}")
    log = axes == "loglog"
    ylabel = "value"
    if log:
        if all(y < 0 for _, y in pts):
            pts = [(x, -y) for x, y in pts]
            ylabel = "|value|"
        if any(x <= 0 or y <= 0 for x, y in pts):
            raise MirrorCorrError("loglog axes require strictly positive data")

    def tx(v):
        return math.log10(v) if log else v

    xs = [tx(x) for x, _ in pts]
    ys = [tx(y) for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + (tx(v) - x0) / (x1 - x0) * pw

    def py(v):
        return _MT + ph - (tx(v) - y0) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W / 2:.1f}" y="{_MT - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    raw_x = [x for x, _ in pts]
    raw_y = [y for _, y in pts]
    for t in _ticks(min(raw_x), max(raw_x), log):
        X = px(t)
        if not (_ML - 0.5 <= X <= _W - _MR + 0.5):
            continue
        parts.append(f'<line x1="{X:.2f}" y1="{_MT + ph}" x2="{X:.2f}" y2="{_MT + ph + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{X:.2f}" y="{_MT + ph + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>'
        )
    for t in _ticks(min(raw_y), max(raw_y), log):
        Y = py(t)
        if not (_MT - 0.5 <= Y <= _MT + ph + 0.5):
            continue
        parts.append(f'<line x1="{_ML - 5}" y1="{Y:.2f}" x2="{_ML}" y2="{Y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{_ML - 8}" y="{Y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>'
        )
    parts.append(
        f'<text x="{_ML + pw / 2:.1f}" y="{_H - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">x</text>'
    )
    parts.append(
        f'<text x="18" y="{_MT + ph / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {_MT + ph / 2:.1f})">{ylabel}</text>'
    )
    poly = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
    parts.append(f'<polyline points="{poly}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>')
    parts.append("</svg>")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
