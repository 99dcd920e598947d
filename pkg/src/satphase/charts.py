"""Minimal standalone SVG charts from CSV columns.

Output is a pure function of the input: coordinates are printed with fixed
precision and elements are emitted in a fixed order, so identical CSVs give
identical bytes.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from html import escape

WIDTH, HEIGHT = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50
COLORS = ("#1f77b4", "#ff7f0e", "#7f7f7f")
HIST_COLUMNS = ("bin_lo", "bin_hi", "count")


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class ChartSpec:
    input_csv: str
    x: str = "gamma"
    y: tuple[str, ...] = ("pct_sat",)
    output_svg: str = "chart.svg"
    title: str = ""
    log_y: bool = False
    kind: str = "auto"  # auto | line | hist

    def __post_init__(self):
        if not 1 <= len(self.y) <= 3:
            raise ChartError("between 1 and 3 y columns are supported")


@dataclass
class Table:
    columns: list[str]
    data: dict[str, list[float]] = field(default_factory=dict)

    def column(self, name: str) -> list[float]:
        if name not in self.data:
            raise ChartError(f"column {name!r} not in CSV header {self.columns}")
        return self.data[name]


def read_table(text: str) -> Table:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ChartError("empty CSV") from None
    table = Table(header, {h: [] for h in header})
    for row in reader:
        if not row:
            continue
        for h, cell in zip(header, row):
            try:
                table.data[h].append(float(cell))
            except ValueError:
                table.data[h].append(math.nan)
    return table


def _f(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(round(t, 10))
        t += step
    return out


def _label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e5 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.6g}"


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi, log_y):
        if xhi == xlo:
            xlo, xhi = xlo - 0.5, xhi + 0.5
        if yhi == ylo:
            ylo, yhi = ylo - 0.5, yhi + 0.5
        self.xlo, self.xhi, self.ylo, self.yhi, self.log_y = xlo, xhi, ylo, yhi, log_y

    def px(self, x):
        return LEFT + (x - self.xlo) / (self.xhi - self.xlo) * (WIDTH - LEFT - RIGHT)

    def py(self, y):
        return HEIGHT - BOTTOM - (y - self.ylo) / (self.yhi - self.ylo) * (HEIGHT - TOP - BOTTOM)


def _axes(frame: _Frame, title: str, xlabel: str, ylabel: str) -> list[str]:
    x0, y0 = LEFT, HEIGHT - BOTTOM
    out = [
        f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{WIDTH - RIGHT}" y2="{y0}" stroke="black"/>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{TOP}" stroke="black"/>',
    ]
    for t in _ticks(frame.xlo, frame.xhi):
        x = frame.px(t)
        out.append(f'<line x1="{_f(x)}" y1="{y0}" x2="{_f(x)}" y2="{y0 + 5}" stroke="black"/>')
        out.append(
            f'<text class="tick" x="{_f(x)}" y="{y0 + 18}" text-anchor="middle" font-size="11">{_label(t)}</text>'
        )
    for t in _ticks(frame.ylo, frame.yhi):
        y = frame.py(t)
        shown = 10**t if frame.log_y else t
        out.append(f'<line x1="{x0 - 5}" y1="{_f(y)}" x2="{x0}" y2="{_f(y)}" stroke="black"/>')
        out.append(
            f'<text class="tick" x="{x0 - 8}" y="{_f(y + 4)}" text-anchor="end" font-size="11">{_label(shown)}</text>'
        )
    out.append(
        f'<text x="{(LEFT + WIDTH - RIGHT) / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="16" y="{(TOP + HEIGHT - BOTTOM) / 2:.2f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {(TOP + HEIGHT - BOTTOM) / 2:.2f})">{escape(ylabel)}</text>'
    )
    return out


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">'
    )
    return "\n".join([head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>', *body, "</svg>"]) + "\n"


def line_chart(table: Table, x: str, ys: tuple[str, ...], title: str = "", log_y: bool = False) -> str:
    xs = table.column(x)
    series = []
    for name in ys:
        pts = []
        for xv, yv in zip(xs, table.column(name)):
            if math.isnan(xv) or math.isnan(yv):
                continue
            if log_y:
                if yv <= 0:
                    continue
                yv = math.log10(yv)
            pts.append((xv, yv))
        series.append((name, pts))
    allx = [p[0] for _, pts in series for p in pts] or [0.0, 1.0]
    ally = [p[1] for _, pts in series for p in pts] or [0.0, 1.0]
    frame = _Frame(min(allx), max(allx), min(ally), max(ally), log_y)
    body = _axes(frame, title, x, ys[0] if len(ys) == 1 else "value")
    for i, (name, pts) in enumerate(series):
        coords = " ".join(f"{_f(frame.px(a))},{_f(frame.py(b))}" for a, b in pts)
        body.append(
            f'<polyline class="series" data-name="{escape(name)}" fill="none" '
            f'stroke="{COLORS[i]}" stroke-width="2" points="{coords}"/>'
        )
    for i, (name, _) in enumerate(series):
        ly = TOP + 8 + 16 * i
        lx = WIDTH - RIGHT - 150
        body.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{COLORS[i]}" stroke-width="2"/>')
        body.append(f'<text class="legend" x="{lx + 26}" y="{ly + 4}" font-size="11">{escape(name)}</text>')
    return _document(body)


def histogram_chart(table: Table, title: str = "") -> str:
    lo, hi, counts = (table.column(c) for c in HIST_COLUMNS)
    if not counts:
        raise ChartError("histogram CSV has no bins")
    frame = _Frame(min(lo), max(hi), 0.0, max(max(counts), 1.0), False)
    body = _axes(frame, title, "value", "count")
    y0 = frame.py(0.0)
    for a, b, c in zip(lo, hi, counts):
        xa, xb = frame.px(a), frame.px(b)
        if xb <= xa:
            xa, xb = xa - 2.0, xa + 2.0
        yt = frame.py(c)
        body.append(
            f'<rect class="bar" x="{_f(xa)}" y="{_f(yt)}" width="{_f(xb - xa)}" '
            f'height="{_f(y0 - yt)}" fill="{COLORS[0]}" stroke="white"/>'
        )
    return _document(body)


def render(spec: ChartSpec, text: str) -> str:
    table = read_table(text)
    kind = spec.kind
    if kind == "auto":
        kind = "hist" if all(c in table.columns for c in HIST_COLUMNS) else "line"
    if kind == "hist":
        return histogram_chart(table, spec.title)
    for col in (spec.x, *spec.y):
        table.column(col)
    return line_chart(table, spec.x, spec.y, spec.title, spec.log_y)
