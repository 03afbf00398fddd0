"""Standalone SVG figures drawn directly as path elements.

Branches are drawn as one straight segment each and step plots as explicit
horizontal and vertical segments, so jumps appear exactly where they are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from rotdisc.core import EPS

RED = "#d62728"
BLUE = "#1f77b4"
GREY = "#7f7f7f"
PALETTE = (BLUE, "#ff7f0e", "#2ca02c", RED, "#9467bd")


def _esc(text) -> str:
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _num(v: float) -> str:
    return format(float(v), ".2f").rstrip("0").rstrip(".")


def _nice_ticks(lo, hi, target=6):
    if not hi > lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return ticks


def _log_ticks(lo, hi):
    return [10.0 ** k for k in range(math.ceil(math.log10(lo) - 1e-9),
                                      math.floor(math.log10(hi) + 1e-9) + 1)]


def _tick_label(t, log):
    if log:
        k = round(math.log10(t))
        return f"1e{k}"
    return format(t, ".6g")


@dataclass
class Panel:
    """One set of axes placed at ``(left, top)`` in figure pixels."""

    left: float
    top: float
    width: float
    height: float
    xlim: tuple
    ylim: tuple
    xlog: bool = False
    ylog: bool = False
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    items: list = field(default_factory=list)

    def _tx(self, x):
        lo, hi = self.xlim
        if self.xlog:
            x, lo, hi = np.log10(x), math.log10(lo), math.log10(hi)
        return self.left + (np.asarray(x, dtype=float) - lo) / (hi - lo) * self.width

    def _ty(self, y):
        lo, hi = self.ylim
        if self.ylog:
            y, lo, hi = np.log10(y), math.log10(lo), math.log10(hi)
        return self.top + self.height - (np.asarray(y, dtype=float) - lo) / (hi - lo) * self.height

    def segments(self, x0, y0, x1, y1, color=BLUE, width=1.0):
        """Independent straight segments, one ``M..L`` pair per entry."""
        X0, Y0 = np.atleast_1d(self._tx(x0)), np.atleast_1d(self._ty(y0))
        X1, Y1 = np.atleast_1d(self._tx(x1)), np.atleast_1d(self._ty(y1))
        d = "".join(f"M{_num(a)} {_num(b)}L{_num(c)} {_num(e)}"
                    for a, b, c, e in zip(X0, Y0, X1, Y1))
        self.items.append(f'<path d="{d}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}" stroke-linecap="round"/>')

    def polyline(self, x, y, color=BLUE, width=1.0, dash=None):
        X, Y = self._tx(x), self._ty(y)
        d = "M" + "L".join(f"{_num(a)} {_num(b)}" for a, b in zip(X, Y))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<path d="{d}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}/>')

    def steps(self, bounds, heights, color=BLUE, width=1.0):
        """Piecewise-constant plot: a horizontal run per bin and a vertical
        segment at every bin edge, including the drops to zero at both ends."""
        bounds = np.asarray(bounds, dtype=float)
        heights = np.asarray(heights, dtype=float)
        X, H = self._tx(bounds), self._ty(heights)
        base = float(self._ty(max(self.ylim[0], 0.0) if not self.ylog else self.ylim[0]))
        parts = [f"M{_num(X[0])} {_num(base)}"]
        for j in range(len(heights)):
            parts.append(f"V{_num(H[j])}H{_num(X[j + 1])}")
        parts.append(f"V{_num(base)}")
        self.items.append(f'<path d="{"".join(parts)}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"/>')

    def dots(self, x, y, color=RED, radius=2.5):
        for a, b in zip(self._tx(x), self._ty(y)):
            self.items.append(f'<circle cx="{_num(a)}" cy="{_num(b)}" r="{radius}" fill="{color}"/>')

    def text(self, x, y, label, anchor="start", size=11, color="black"):
        self.items.append(f'<text x="{_num(self._tx(x))}" y="{_num(self._ty(y))}" '
                          f'font-size="{size}" text-anchor="{anchor}" fill="{color}">{_esc(label)}</text>')

    def legend(self, entries):
        for i, (label, color) in enumerate(entries):
            y = self.top + 14 + 14 * i
            x = self.left + 10
            self.items.append(f'<path d="M{_num(x)} {_num(y - 4)}H{_num(x + 18)}" '
                              f'stroke="{color}" stroke-width="2"/>')
            self.items.append(f'<text x="{_num(x + 24)}" y="{_num(y)}" font-size="11">{_esc(label)}</text>')

    def render(self) -> str:
        out = [f'<rect x="{_num(self.left)}" y="{_num(self.top)}" width="{_num(self.width)}" '
               f'height="{_num(self.height)}" fill="none" stroke="black"/>']
        xt = _log_ticks(*self.xlim) if self.xlog else _nice_ticks(*self.xlim)
        yt = _log_ticks(*self.ylim) if self.ylog else _nice_ticks(*self.ylim)
        bottom = self.top + self.height
        for t in xt:
            px = float(self._tx(t))
            out.append(f'<path d="M{_num(px)} {_num(bottom)}V{_num(bottom + 4)}" stroke="black"/>')
            out.append(f'<text x="{_num(px)}" y="{_num(bottom + 16)}" font-size="10" '
                       f'text-anchor="middle">{_tick_label(t, self.xlog)}</text>')
        for t in yt:
            py = float(self._ty(t))
            out.append(f'<path d="M{_num(self.left - 4)} {_num(py)}H{_num(self.left)}" stroke="black"/>')
            out.append(f'<text x="{_num(self.left - 6)}" y="{_num(py + 3)}" font-size="10" '
                       f'text-anchor="end">{_tick_label(t, self.ylog)}</text>')
        if self.title:
            out.append(f'<text x="{_num(self.left + self.width / 2)}" y="{_num(self.top - 8)}" '
                       f'font-size="13" text-anchor="middle">{_esc(self.title)}</text>')
        if self.xlabel:
            out.append(f'<text x="{_num(self.left + self.width / 2)}" y="{_num(bottom + 32)}" '
                       f'font-size="11" text-anchor="middle">{_esc(self.xlabel)}</text>')
        if self.ylabel:
            cx, cy = self.left - 50, self.top + self.height / 2
            out.append(f'<text x="{_num(cx)}" y="{_num(cy)}" font-size="11" text-anchor="middle" '
                       f'transform="rotate(-90 {_num(cx)} {_num(cy)})">{_esc(self.ylabel)}</text>')
        clip = f"clip{int(self.left)}_{int(self.top)}"
        out.append(f'<clipPath id="{clip}"><rect x="{_num(self.left)}" y="{_num(self.top)}" '
                   f'width="{_num(self.width)}" height="{_num(self.height)}"/></clipPath>')
        out.append(f'<g clip-path="url(#{clip})">')
        out.extend(self.items)
        out.append("</g>")
        return "\n".join(out)


def _pad(lo, hi, frac=0.05):
    if hi <= lo:
        return lo - 0.5, hi + 0.5
    span = hi - lo
    return lo - frac * span, hi + frac * span


def _log_range(values):
    v = np.asarray([x for x in values if x > 0], dtype=float)
    if v.size == 0:
        return 0.1, 10.0
    lo, hi = float(v.min()), float(v.max())
    lo = 10 ** math.floor(math.log10(lo))
    hi = 10 ** math.ceil(math.log10(hi))
    if hi <= lo:
        hi = lo * 10
    return lo, hi


def document(panels: Sequence[Panel], width, height, timestamp: Optional[str] = None) -> str:
    """Wrap panels into an SVG document; ``timestamp`` is embedded only if given."""
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif">')
    body = [head, f'<rect width="{width}" height="{height}" fill="white"/>']
    body.extend(p.render() for p in panels)
    if timestamp is not None:
        body.append(f'<text x="{width - 6}" y="{height - 6}" font-size="9" '
                    f'text-anchor="end" fill="{GREY}">{_esc(timestamp)}</text>')
    body.append("</svg>")
    return "\n".join(body) + "\n"


def branches_figure(x_left, x_right, a, b, title="D_N(x)", timestamp=None) -> str:
    """D_N as its branch segments, one straight segment per branch."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    panel = Panel(80, 40, 600, 360, (0.0, 1.0), _pad(float(min(a.min(), b.min())),
                                                      float(max(a.max(), b.max()))),
                  title=title, xlabel="x", ylabel="D_N(x)")
    panel.segments([0.0], [0.0], [1.0], [0.0], color=GREY, width=0.5)
    panel.segments(x_left, a, x_right, b)
    return document([panel], 720, 450, timestamp)


def pdf_figure(bounds, density, title="pdf", zoom=None, timestamp=None) -> str:
    """Step plot of a piecewise-constant density, with an optional second
    panel restricted to ``zoom = (y_lo, y_hi)``."""
    bounds = np.asarray(bounds, dtype=float)
    density = np.asarray(density, dtype=float)
    top = float(density.max()) if density.size else 1.0
    panels = [Panel(80, 40, 600, 300, _pad(float(bounds[0]), float(bounds[-1])),
                    (0.0, 1.1 * max(top, 1e-300)), title=title, xlabel="y", ylabel="density")]
    panels[0].steps(bounds, density)
    height = 400
    if zoom is not None:
        lo, hi = float(zoom[0]), float(zoom[1])
        if not hi > lo:
            raise ValueError("zoom window needs lo < hi")
        ia = max(int(np.searchsorted(bounds, lo, side="right")) - 1, 0)
        ib = min(int(np.searchsorted(bounds, hi, side="left")) + 1, len(bounds))
        sub_b = bounds[ia:ib]
        sub_d = density[ia:ib - 1]
        peak = float(sub_d.max()) if sub_d.size else top
        z = Panel(80, 410, 600, 240, (lo, hi), (0.0, 1.1 * max(peak, 1e-300)),
                  title=f"zoom {lo:.6g} .. {hi:.6g}", xlabel="y", ylabel="density")
        if sub_d.size:
            z.steps(sub_b, sub_d)
        panels.append(z)
        height = 720
    return document(panels, 720, height, timestamp)


def sweep_figure(n, sup_norm, variance, kurtosis, highlight, title="", timestamp=None) -> str:
    """Three stacked panels against N on a log axis; ``highlight`` marks the
    rows drawn as red dots."""
    n = np.asarray(n, dtype=float)
    mask = np.asarray(highlight, dtype=bool)
    xlim = _log_range(n)
    panels = []
    for i, (name, vals) in enumerate((("sup_norm", sup_norm), ("variance", variance),
                                       ("kurtosis", kurtosis))):
        vals = np.asarray(vals, dtype=float)
        p = Panel(90, 40 + 250 * i, 600, 190, xlim,
                  _pad(float(np.nanmin(vals)), float(np.nanmax(vals))),
                  xlog=True, title=(title if i == 0 else ""), xlabel="N", ylabel=name)
        p.polyline(n, vals, color=BLUE, width=0.8)
        if mask.any():
            p.dots(n[mask], vals[mask])
        panels.append(p)
    return document(panels, 720, 800, timestamp)


def bench_figure(series, title="runtime", timestamp=None) -> str:
    """Log-log runtime plot; ``series`` maps an algorithm name to
    ``(N, seconds, slope)``."""
    all_n = [v for n, _, _ in series.values() for v in n]
    all_t = [v for _, t, _ in series.values() for v in t]
    p = Panel(90, 40, 600, 360, _log_range(all_n), _log_range(all_t), xlog=True, ylog=True,
              title=title, xlabel="N", ylabel="seconds")
    legend = []
    for i, (name, (n, t, slope)) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        p.polyline(n, t, color=color, width=1.5)
        p.dots(n, t, color=color, radius=2.0)
        legend.append((f"{name} (slope {slope:.2f})", color))
    p.legend(legend)
    return document([p], 720, 450, timestamp)


def error_figure(q, max_error, title="endpoint error at rho = 1/q, N = q", timestamp=None) -> str:
    """Endpoint error against q on log-log axes with the ``N*eps/2`` reference."""
    q = np.asarray(q, dtype=float)
    err = np.asarray(max_error, dtype=float)
    ref = 0.5 * q * EPS
    pos = err > 0
    p = Panel(90, 40, 600, 360, _log_range(q), _log_range(np.concatenate((err[pos], ref))),
              xlog=True, ylog=True, title=title, xlabel="q", ylabel="max error")
    p.polyline(q, ref, color=GREY, dash="4 3")
    if pos.any():
        p.dots(q[pos], err[pos], color=BLUE)
    p.legend([("max |endpoint| - 1/2", BLUE), ("N eps / 2", GREY)])
    return document([p], 720, 450, timestamp)
