"""Line and staircase charts of CSV columns, laid out for the SVG template."""
import math
from dataclasses import dataclass, field

from django.conf import settings

MARGIN = 60
TICKS = 5
COLORS = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b')


def numeric(cell):
    """The float in a CSV cell, or None for NA, blanks and other text."""
    try:
        value = float(cell)
    except (TypeError, ValueError):
        return None
    return value if math.isfinite(value) else None


def padded(lo, hi):
    if lo is None:
        return 0.0, 1.0
    if lo == hi:
        pad = abs(lo) / 2 or 1.0
        return lo - pad, hi + pad
    return lo, hi


@dataclass
class Series:
    name: str
    color: str
    legend_y: float = 0
    points: list = field(default_factory=list)
    pixels: list = field(default_factory=list)
    path: list = field(default_factory=list)


@dataclass
class Chart:
    width: int
    height: int
    x_label: str
    y_label: str
    series: list
    x_ticks: list
    y_ticks: list

    @property
    def left(self):
        return MARGIN

    @property
    def right(self):
        return self.width - MARGIN

    @property
    def top(self):
        return MARGIN

    @property
    def bottom(self):
        return self.height - MARGIN

    @property
    def center_x(self):
        return self.width / 2

    @property
    def center_y(self):
        return self.height / 2


def build_chart(header, rows, x_column=None, y_columns=None, staircase=False,
                width=None, height=None):
    """Lays out the chosen columns of a CSV table; unusable cells are skipped."""
    width = width or settings.PLOT_WIDTH
    height = height or settings.PLOT_HEIGHT
    if not header:
        header, x_column, y_columns = ['x', 'y'], None, None
    x_column = x_column or header[0]
    if x_column not in header:
        raise KeyError(x_column)
    if y_columns is None:
        y_columns = [h for h in header if h != x_column]
    xi = header.index(x_column)
    series = []
    for k, name in enumerate(y_columns):
        yi = header.index(name)
        s = Series(name, COLORS[k % len(COLORS)], legend_y=MARGIN + 16 * k)
        for row in rows:
            if len(row) <= max(xi, yi):
                continue
            x, y = numeric(row[xi]), numeric(row[yi])
            if x is not None and y is not None:
                s.points.append((x, y))
        series.append(s)

    xs = [x for s in series for x, _ in s.points]
    ys = [y for s in series for _, y in s.points]
    x_lo, x_hi = padded(min(xs, default=None), max(xs, default=None))
    y_lo, y_hi = padded(min(ys, default=None), max(ys, default=None))
    chart = Chart(width, height, x_column, ", ".join(y_columns), series, [], [])

    def px(x):
        return chart.left + (x - x_lo) / (x_hi - x_lo) * (chart.right - chart.left)

    def py(y):
        return chart.bottom - (y - y_lo) / (y_hi - y_lo) * (chart.bottom - chart.top)

    for s in series:
        s.pixels = [(px(x), py(y)) for x, y in s.points]
        if staircase:
            for j, (x, y) in enumerate(s.pixels):
                if j:
                    s.path.append((x, s.path[-1][1]))
                s.path.append((x, y))
        else:
            s.path = list(s.pixels)
    for j in range(TICKS + 1):
        x = x_lo + (x_hi - x_lo) * j / TICKS
        y = y_lo + (y_hi - y_lo) * j / TICKS
        chart.x_ticks.append((px(x), '%.4g' % x))
        chart.y_ticks.append((py(y), '%.4g' % y))
    return chart
