"""Deterministic SVG drawings of path systems, dimers and height functions.

Lattice vertex ``(col, num)`` is drawn at ``x = col``, ``y = num / (col + 1)``
with ``y`` pointing up.  With ``rescale`` both coordinates are divided by the
number of parts ``n``, which is the frame the arctic curves live in, so an
overlay curve is only accepted together with ``rescale``.

Coordinates are kept as exact fractions until the moment they are written;
numbers are printed with a fixed number of decimals so that equal inputs give
byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .arctic import sample_curve
from .errors import MismatchedScene
from .lattice import (
    DimerConfiguration,
    DualPathSystem,
    HeightFunction,
    PathSystem,
    build_lh_graph,
    graph_width,
    height_function,
    step_right,
)
from .model import Profile

SCENES = ("paths", "dual-paths", "dimers", "height")
SKELETON_LIMIT = 20000
MARGIN = 20
PATH_COLOURS = ("#1f4e9c", "#b8321f", "#2b8a3e", "#7a3fa0", "#c77c0e", "#0f7f86")


@dataclass(frozen=True)
class RenderSpec:
    scene: str
    overlay_curve: tuple[Profile, float] | None = None
    width: int = 800
    height: int = 500
    rescale: bool = False
    skeleton: bool = True
    curve_points: int = 400

    def __post_init__(self):
        if self.scene not in SCENES:
            raise ValueError(f"unknown scene {self.scene!r}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if self.overlay_curve is not None and not self.rescale:
            raise ValueError("an overlay curve needs rescaled coordinates")


def _num(v) -> str:
    text = f"{float(v):.4f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def vertex_point(col: int, num: int) -> tuple[Fraction, Fraction]:
    return Fraction(col), Fraction(num, col + 1)


class _Canvas:
    """Maps model coordinates into the pixel box and collects SVG elements."""

    def __init__(self, spec: RenderSpec, x_max: Fraction, y_max: Fraction, scale: int):
        self.spec = spec
        self.scale = Fraction(scale) if spec.rescale else Fraction(1)
        self.x_max = max(Fraction(x_max) / self.scale, Fraction(1, 100))
        self.y_max = max(Fraction(y_max) / self.scale, Fraction(1, 100))
        inner_w = spec.width - 2 * MARGIN
        inner_h = spec.height - 2 * MARGIN
        self.unit = min(Fraction(inner_w) / self.x_max, Fraction(inner_h) / self.y_max)
        self.layers: list[str] = []

    def px(self, x, y, prescaled: bool = False) -> tuple[str, str]:
        if not prescaled:
            x, y = Fraction(x) / self.scale, Fraction(y) / self.scale
        px = MARGIN + float(x) * float(self.unit)
        py = self.spec.height - MARGIN - float(y) * float(self.unit)
        return _num(px), _num(py)

    def polyline(self, pts: Iterable, stroke: str, width: float, css: str, prescaled: bool = False) -> str:
        coords = " ".join(",".join(self.px(x, y, prescaled)) for x, y in pts)
        return (
            f'<polyline class="{css}" points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_num(width)}"/>'
        )

    def line(self, a, b, stroke: str, width: float, css: str) -> str:
        (x1, y1), (x2, y2) = self.px(*a), self.px(*b)
        return (
            f'<line class="{css}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="{stroke}" stroke-width="{_num(width)}"/>'
        )

    def group(self, layer: str, items: Sequence[str]) -> None:
        body = "\n".join(items)
        self.layers.append(f'<g id="{layer}">\n{body}\n</g>' if items else f'<g id="{layer}"/>')

    def document(self, title: str) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.spec.width}" '
            f'height="{self.spec.height}" viewBox="0 0 {self.spec.width} {self.spec.height}">\n'
            f"<title>{escape(title)}</title>\n"
            f'<rect width="{self.spec.width}" height="{self.spec.height}" fill="#ffffff"/>'
        )
        return head + "\n" + "\n".join(self.layers) + "\n</svg>\n"


def _skeleton(canvas: _Canvas, t: int, width: int) -> list[str]:
    g = build_lh_graph(t, width)
    if len(g.vertices()) > SKELETON_LIMIT:
        return []
    return [
        canvas.line(vertex_point(*u), vertex_point(*v), "#d0d0d0", 0.5, "edge")
        for u, v in g.edges()
    ]


def _overlay(canvas: _Canvas, spec: RenderSpec) -> None:
    if spec.overlay_curve is None:
        return
    profile, tau = spec.overlay_curve
    items = []
    for pl in sample_curve(profile, tau, spec.curve_points):
        if len(pl.points) >= 2:
            items.append(canvas.polyline(pl.points, "#000000", 1.5, f"curve {pl.branch.kind}", True))
    canvas.group("curve", items)


def _paths_svg(ps: PathSystem, spec: RenderSpec) -> str:
    width = graph_width(ps.shape)
    canvas = _Canvas(spec, Fraction(width), Fraction(ps.t), ps.n)
    canvas.group("skeleton", _skeleton(canvas, ps.t, width) if spec.skeleton else [])
    items = []
    # an empty shape only has vertical drops, which lie on the skeleton
    for i, path in enumerate(ps.paths if ps.shape.size else ()):
        pts = [vertex_point(*v) for v in path]
        items.append(canvas.polyline(pts, PATH_COLOURS[i % len(PATH_COLOURS)], 1.5, f"path path-{i + 1}"))
    canvas.group("paths", items)
    _overlay(canvas, spec)
    return canvas.document(f"path system, lambda=({ps.shape}), t={ps.t}")


def _dual_svg(dps: DualPathSystem, spec: RenderSpec) -> str:
    width = max(v[0] for p in dps.paths for v in p) if any(dps.paths) else 1
    canvas = _Canvas(spec, Fraction(width), Fraction(dps.t), dps.n)
    canvas.group("skeleton", _skeleton(canvas, dps.t, width) if spec.skeleton else [])
    items = []
    for j, path in enumerate(dps.paths):
        pts = [vertex_point(*v) for v in path]
        items.append(canvas.polyline(pts, PATH_COLOURS[j % len(PATH_COLOURS)], 1.5, f"dual dual-{j + 1}"))
    canvas.group("dual-paths", items)
    _overlay(canvas, spec)
    return canvas.document(f"dual path system, t={dps.t}")


def _dimer_position(v: tuple, shape, t: int) -> tuple[Fraction, Fraction]:
    kind = v[0]
    if kind in ("w", "b"):
        x, y = vertex_point(v[1], v[2])
        shift = Fraction(-1, 6) if kind == "w" else Fraction(1, 6)
        return x + shift, y
    i = v[1]
    if kind == "W":
        return Fraction(shape.n - i), Fraction(t) + Fraction(1, 3)
    return Fraction(shape.endpoint(i)), Fraction(-1, 3)


def _dimers_svg(config: DimerConfiguration, spec: RenderSpec) -> str:
    shape, t = config.lattice.shape, config.lattice.t
    width = graph_width(shape)
    canvas = _Canvas(spec, Fraction(width) + 1, Fraction(t) + 1, shape.n)
    items = [
        canvas.line(_dimer_position(w, shape, t), _dimer_position(b, shape, t), "#444444", 2.0, "dimer")
        for w, b in config.sorted_edges()
    ]
    canvas.group("dimers", items)
    _overlay(canvas, spec)
    return canvas.document(f"dimer configuration, lambda=({shape}), t={t}")


def _height_svg(hf: HeightFunction, spec: RenderSpec) -> str:
    if not hf.values:
        raise MismatchedScene("height function has no faces")
    cols = {}
    for c, k in hf.values:
        cols[c] = max(cols.get(c, -1), k)
    c0 = min(cols)
    t = (cols[c0] + 2) // (c0 + 1)
    width = max(cols) + 1
    canvas = _Canvas(spec, Fraction(width), Fraction(t), hf.outer or 1)
    top = max(max(hf.values.values()), 1)
    items = []
    for (c, k), h in sorted(hf.values.items()):
        corners = [
            vertex_point(c, k),
            vertex_point(*step_right(c, k)),
            vertex_point(*step_right(c, k + 1)),
            vertex_point(c, k + 1),
        ]
        shade = 255 - int(round(200 * h / top))
        colour = f"#{shade:02x}{shade:02x}{255:02x}"
        coords = " ".join(",".join(canvas.px(x, y)) for x, y in corners)
        items.append(f'<polygon class="face" points="{coords}" fill="{colour}" stroke="none"><title>{h}</title></polygon>')
    canvas.group("height", items)
    _overlay(canvas, spec)
    return canvas.document("height function")


def render(scene_data, spec: RenderSpec) -> str:
    """SVG document for ``scene_data``; the data type must match ``spec.scene``."""
    expected = {
        "paths": PathSystem,
        "dual-paths": DualPathSystem,
        "dimers": DimerConfiguration,
        "height": (HeightFunction, PathSystem),
    }[spec.scene]
    if not isinstance(scene_data, expected):
        raise MismatchedScene(f"scene {spec.scene!r} cannot draw {type(scene_data).__name__}")
    if spec.scene == "paths":
        return _paths_svg(scene_data, spec)
    if spec.scene == "dual-paths":
        return _dual_svg(scene_data, spec)
    if spec.scene == "dimers":
        return _dimers_svg(scene_data, spec)
    hf = height_function(scene_data) if isinstance(scene_data, PathSystem) else scene_data
    return _height_svg(hf, spec)


def render_curve(profile: Profile, tau: float, points: int = 400, width: int = 600, height: int = 400) -> str:
    """Stand-alone SVG of the arctic curve in the rescaled frame."""
    polylines = sample_curve(profile, tau, points)
    xs = [x for pl in polylines for x, _ in pl.points] or [1.0]
    spec = RenderSpec("paths", (profile, tau), width, height, rescale=True, curve_points=points)
    canvas = _Canvas(spec, Fraction(max(xs)).limit_denominator(10**6), Fraction(tau).limit_denominator(10**6), 1)
    canvas.scale = Fraction(1)
    _overlay(canvas, spec)
    return canvas.document(f"arctic curve {profile.name}, tau={tau}")


def save_png(scene_data, spec: RenderSpec, path: str) -> None:
    """Raster version of the same scene drawn with matplotlib (Agg backend)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(spec.width / 100, spec.height / 100), dpi=100)
    div = 1.0
    if spec.rescale:
        n = getattr(scene_data, "n", None)
        if n is None and isinstance(scene_data, DimerConfiguration):
            n = scene_data.lattice.shape.n
        div = float(n or 1)
    if isinstance(scene_data, (PathSystem, DualPathSystem)):
        for k, verts in enumerate(scene_data.paths):
            xs = [v[0] / div for v in verts]
            ys = [v[1] / (v[0] + 1) / div for v in verts]
            ax.plot(xs, ys, color=PATH_COLOURS[k % len(PATH_COLOURS)], lw=1)
    elif isinstance(scene_data, DimerConfiguration):
        shape, t = scene_data.lattice.shape, scene_data.lattice.t
        for w, b in scene_data.sorted_edges():
            (x1, y1), (x2, y2) = _dimer_position(w, shape, t), _dimer_position(b, shape, t)
            ax.plot([float(x1) / div, float(x2) / div], [float(y1) / div, float(y2) / div], color="#444444", lw=1)
    else:
        hf = height_function(scene_data) if isinstance(scene_data, PathSystem) else scene_data
        pts = [((c + 0.5) / div, (k + 0.5) / (c + 1) / div, h) for (c, k), h in hf.values.items()]
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], c=[p[2] for p in pts], s=4, cmap="Blues")
    if spec.overlay_curve is not None:
        profile, tau = spec.overlay_curve
        for pl in sample_curve(profile, tau, spec.curve_points):
            if pl.points:
                ax.plot([p[0] for p in pl.points], [p[1] for p in pl.points], color="black", lw=1.2)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_curve_png(profile: Profile, tau: float, path: str, points: int = 400) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    for pl in sample_curve(profile, tau, points):
        if pl.points:
            ax.plot([p[0] for p in pl.points], [p[1] for p in pl.points], lw=1.2, label=pl.branch.kind)
    ax.set_aspect("equal")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
