"""ASCII and SVG renderings of Ext charts in the Adams convention: t - s runs
horizontally, s vertically."""
from __future__ import annotations

from logging import getLogger
from typing import Dict, List, Tuple

from .errors import WindowError
from .homalg import ExtChart

logger = getLogger(__name__)

EMPTY = "(no classes)"

FORMATS = ("ascii", "svg")

CELL = 24
MARGIN = 32
DOT_RADIUS = 3
DOT_SPREAD = 6

NS_SVG = "http://www.w3.org/2000/svg"


def adams_points(chart: ExtChart) -> Dict[Tuple[int, int], int]:
    """{(t - s, s): dim} for the nonzero entries."""
    return {(t - s, s): n for (s, t), n in chart.dims.items() if n}


def _bounds(points: Dict[Tuple[int, int], int]) -> Tuple[int, int, int]:
    xs = [x for x, _ in points]
    return min(xs), max(xs), max(s for _, s in points)


def to_ascii(chart: ExtChart) -> str:
    """Grid of dimensions, highest s on top; zero entries print as '.'."""
    points = adams_points(chart)
    if not points:
        return EMPTY
    x_lo, x_hi, s_hi = _bounds(points)
    columns = list(range(x_lo, x_hi + 1))
    cells = [str(n) for n in points.values()] + [str(x) for x in columns]
    width = max(len(c) for c in cells)
    label_width = max(len(str(s_hi)), len("s"))
    rows = []
    for s in range(s_hi, -1, -1):
        entries = [str(points.get((x, s), ".")).rjust(width) for x in columns]
        rows.append(f"{str(s).rjust(label_width)} | {' '.join(entries)}")
    rows.append(f"{' ' * label_width} +-{'-' * (len(columns) * (width + 1) - 1)}")
    rows.append(
        f"{'s'.rjust(label_width)}   {' '.join(str(x).rjust(width) for x in columns)}  (t-s)"
    )
    return "\n".join(rows)


def _props(attrs: Dict[str, object]) -> str:
    return " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())


def _element(tag: str, inner: str = "", **attrs: object) -> str:
    head = f"{tag} {_props(attrs)}" if attrs else tag
    if inner:
        return f"<{head}>{inner}</{tag}>"
    return f"<{head}/>"


def to_svg(chart: ExtChart) -> str:
    """One dot per dimension unit; dots of the same bidegree are spread
    horizontally. Integer coordinates keep the output byte-stable."""
    points = adams_points(chart)
    if not points:
        return EMPTY
    x_lo, x_hi, s_hi = _bounds(points)
    width = 2 * MARGIN + (x_hi - x_lo) * CELL
    height = 2 * MARGIN + s_hi * CELL

    def px(x: int) -> int:
        return MARGIN + (x - x_lo) * CELL

    def py(s: int) -> int:
        return height - MARGIN - s * CELL

    parts: List[str] = []
    for x in range(x_lo, x_hi + 1):
        parts.append(
            _element("line", x1=px(x), y1=py(0), x2=px(x), y2=py(s_hi), stroke="#ddd")
        )
        parts.append(
            _element(
                "text", str(x), x=px(x), y=height - MARGIN // 3, font_size=10, text_anchor="middle"
            )
        )
    for s in range(s_hi + 1):
        parts.append(
            _element("line", x1=px(x_lo), y1=py(s), x2=px(x_hi), y2=py(s), stroke="#ddd")
        )
        parts.append(
            _element("text", str(s), x=MARGIN // 3, y=py(s) + 4, font_size=10, text_anchor="middle")
        )
    for (x, s), n in sorted(points.items()):
        for k in range(n):
            offset = DOT_SPREAD * k - (DOT_SPREAD * (n - 1)) // 2
            parts.append(_element("circle", cx=px(x) + offset, cy=py(s), r=DOT_RADIUS))
    if chart.note:
        parts.append(_element("title", chart.note.replace("&", "&amp;").replace("<", "&lt;")))
    inner = "\n".join(parts)
    return f'<svg {_props(dict(width=width, height=height, xmlns=NS_SVG))}>\n{inner}\n</svg>'


def emit_chart(chart: ExtChart, fmt: str = "ascii") -> str:
    if chart.max_t < chart.min_t or chart.max_s < 0:
        raise WindowError(
            f"empty chart range s <= {chart.max_s}, t in [{chart.min_t}, {chart.max_t}]"
        )
    if fmt == "ascii":
        return to_ascii(chart)
    if fmt == "svg":
        return to_svg(chart)
    raise ValueError(f"unknown chart format {fmt!r}, expected one of {FORMATS}")
