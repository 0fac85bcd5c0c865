# src/render.py

"""SVG pictures of embeddings, walks and graph collections using drawsvg."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Mapping

import drawsvg as draw

from .config import ensure_directory
from .geometry_core import Point
from .sge import GraphCollection, verify_simultaneous
from .utils import bounding_box
from .walk import DirectionalWalk, verify_walk_realization

logger = logging.getLogger(__name__)


class Theme:
    """Colors and sizes for every picture."""

    def __init__(
        self,
        background: str = "#ffffff",
        point_fill: str = "#1e293b",
        text_color: str = "#1e293b",
        walk_color: str = "#3b82f6",
        violation_color: str = "#dc2626",
        palette: tuple[str, ...] = (
            "#2563eb", "#16a34a", "#9333ea", "#ea580c", "#0891b2",
            "#ca8a04", "#db2777", "#4b5563",
        ),
        size: float = 640.0,
        padding: float = 40.0,
        point_radius: float = 4.0,
        font_size: float = 12.0,
    ):
        self.background = background
        self.point_fill = point_fill
        self.text_color = text_color
        self.walk_color = walk_color
        self.violation_color = violation_color
        self.palette = palette
        self.size = size
        self.padding = padding
        self.point_radius = point_radius
        self.font_size = font_size

    def graph_color(self, k: int) -> str:
        return self.palette[k % len(self.palette)]


DEFAULT_THEME = Theme()


class _Canvas:
    """Maps exact plane coordinates onto an SVG square with y pointing up."""

    def __init__(self, emb: Mapping[str, Point], theme: Theme):
        self.theme = theme
        if emb:
            min_x, min_y, max_x, max_y = (float(v) for v in bounding_box(emb))
        else:
            min_x = min_y = 0.0
            max_x = max_y = 1.0
        span = max(max_x - min_x, max_y - min_y) or 1.0
        self.min_x, self.min_y = min_x, min_y
        self.scale = (theme.size - 2 * theme.padding) / span
        self.drawing = draw.Drawing(theme.size, theme.size)
        self.drawing.append(draw.Rectangle(0, 0, theme.size, theme.size, fill=theme.background))

    def xy(self, p: Point) -> tuple[float, float]:
        t = self.theme
        x = t.padding + (float(p.x) - self.min_x) * self.scale
        y = t.size - t.padding - (float(p.y) - self.min_y) * self.scale
        return x, y

    def segment(self, p: Point, q: Point, color: str, width: float = 1.5, **kwargs) -> None:
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        self.drawing.append(draw.Line(x1, y1, x2, y2, stroke=color, stroke_width=width, **kwargs))

    def points(self, emb: Mapping[str, Point], names: Iterable[str] | None = None, labels: bool = True) -> None:
        t = self.theme
        for name in names if names is not None else emb:
            x, y = self.xy(emb[name])
            self.drawing.append(draw.Circle(x, y, t.point_radius, fill=t.point_fill))
            if labels:
                self.drawing.append(
                    draw.Text(name, t.font_size, x + t.point_radius + 2, y - t.point_radius - 2, fill=t.text_color)
                )


def render_points(emb: Mapping[str, Point], theme: Theme | None = None, labels: bool = True) -> draw.Drawing:
    canvas = _Canvas(emb, theme or DEFAULT_THEME)
    canvas.points(emb, labels=labels)
    return canvas.drawing


def render_walk(w: DirectionalWalk, emb: Mapping[str, Point], theme: Theme | None = None) -> draw.Drawing:
    """
    The walk as a polyline with each inner turn written next to its vertex.
    Turns the embedding gets wrong are drawn in the violation color.
    """
    theme = theme or DEFAULT_THEME
    pts = {v: emb[v] for v in w.vertices}
    canvas = _Canvas(pts, theme)
    wrong = {v.triple for v in verify_walk_realization(w, emb).violations}

    s = w.sequence
    for i in range(w.t - 1):
        canvas.segment(emb[s[i]], emb[s[i + 1]], theme.walk_color, opacity=0.7)
    for i, (triple, d) in enumerate(w.triples()):
        x, y = canvas.xy(emb[s[i + 1]])
        color = theme.violation_color if triple in wrong else theme.text_color
        canvas.drawing.append(
            draw.Text(f"{i + 2}{d.value}", theme.font_size * 0.8, x - 6, y + theme.font_size + 2, fill=color)
        )
    canvas.points(pts)
    return canvas.drawing


def render_collection(
    coll: GraphCollection,
    emb: Mapping[str, Point],
    theme: Theme | None = None,
    labels: bool = True,
) -> draw.Drawing:
    """One color per graph; edges taking part in a same-graph crossing are drawn in red."""
    theme = theme or DEFAULT_THEME
    canvas = _Canvas({v: emb[v] for v in coll.vertices}, theme)
    report = verify_simultaneous(coll, emb)
    bad = {
        (v.graph, frozenset(pair))
        for v in report.violations
        for pair in (v.first, v.second)
        if len(pair) == 2
    }
    for k, (name, G) in enumerate(coll.graphs.items()):
        color = theme.graph_color(k)
        for a, b in G.edges:
            hit = (name, frozenset((a, b))) in bad
            canvas.segment(
                emb[a], emb[b],
                theme.violation_color if hit else color,
                width=2.5 if hit else 1.2,
                opacity=1.0 if hit else 0.6,
            )
    canvas.points(emb, coll.vertices, labels=labels)
    if report.violations:
        logger.info("render_collection: %d violations highlighted", len(report.violations))
    return canvas.drawing


def save_drawing(d: draw.Drawing, path: Path) -> Path:
    path = Path(path)
    ensure_directory(path.parent)
    d.save_svg(str(path))
    return path
