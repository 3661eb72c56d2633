"""Deterministic synthetic chart generator.

Renders bar, line, and pie charts with an ownership map so every element's
pixel mask is exact, and builds the matching ground-truth chart tree in the
same pass.  All geometry is integer arithmetic; rendering the same spec is
byte-identical on any platform, which makes these charts usable as golden
oracles for decomposition and compositing tests.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .colors import AXIS_GRAY, BLACK, DEFAULT_PALETTE, FRAME_GRAY, WHITE
from .compose import LEGEND_LABEL_GAP
from .errors import CanvasTooSmall
from .font import render_text_mask, text_size
from .masks import rle_encode
from .raster import polyline_mask, wedge_slice_map
from .tree import ChartTree, ChartType, Node, NodeKind, Region, StyleAttrs, new_skeleton

MARGIN_TOP = 30
MARGIN_BOTTOM = 34
MARGIN_LEFT = 56
MARGIN_RIGHT = 16
LEGEND_BAND = 118
GRID_COLOR = (210, 210, 210, 255)

CATEGORY_NAMES = ["ALFA", "BETA", "CURL", "DUNE", "ECHO", "FERN", "GUST", "HALO"]
SERIES_NAMES = ["KILO", "LIMA", "MIKE"]
TITLE_HEADS = ["ANNUAL", "WEEKLY", "GLOBAL", "PILOT", "FIELD", "MARKET"]
TITLE_TAILS = ["TOTALS", "COUNTS", "SHARES", "REPORT", "SURVEY", "VOLUME"]


@dataclass(frozen=True)
class ChartSpec:
    chart_type: ChartType
    data: tuple[tuple[str, str, float], ...]  # (category, series, value)
    title: str = "UNTITLED"
    show_legend: bool = False
    show_value_labels: bool = False
    canvas: tuple[int, int] = (480, 320)
    palette: tuple[tuple[int, int, int, int], ...] = tuple(DEFAULT_PALETTE)
    rng_seed: int = 0
    gridlines: bool = False

    def categories(self) -> list[str]:
        seen: list[str] = []
        for cat, _, _ in self.data:
            if cat not in seen:
                seen.append(cat)
        return seen

    def series(self) -> list[str]:
        seen: list[str] = []
        for _, ser, _ in self.data:
            if ser not in seen:
                seen.append(ser)
        return seen

    def validate(self) -> None:
        if not self.data:
            raise ValueError("spec needs at least one datum")
        if any(v <= 0 for _, _, v in self.data):
            raise ValueError("values must be positive")
        series = self.series()
        if self.chart_type == ChartType.PIE and len(series) != 1:
            raise ValueError("pie specs take exactly one series")
        if len(self.palette) < len(series):
            raise ValueError("palette must cover every series")
        if self.chart_type == ChartType.PIE and len(self.palette) < len(self.categories()):
            raise ValueError("pie palette must cover every category")


@dataclass
class GroundTruth:
    image: np.ndarray
    tree: ChartTree


def sample_spec(seed: int, chart_type: ChartType) -> ChartSpec:
    """Deterministic spec: 2-8 categories, 1-3 series, values in [1, 100]."""
    rng = random.Random(f"{chart_type.value}:{seed}")
    n_cats = rng.randint(2, 8)
    n_series = 1 if chart_type == ChartType.PIE else rng.randint(1, 3)
    cats = rng.sample(CATEGORY_NAMES, n_cats)
    series = SERIES_NAMES[:n_series]
    data = tuple(
        (cat, ser, float(rng.randint(1, 100))) for cat in cats for ser in series
    )
    start = rng.randrange(len(DEFAULT_PALETTE))
    palette = tuple(DEFAULT_PALETTE[(start + i) % len(DEFAULT_PALETTE)]
                    for i in range(len(DEFAULT_PALETTE)))
    show_legend = n_series >= 2 or rng.random() < 0.4
    return ChartSpec(
        chart_type=chart_type,
        data=data,
        title=f"{rng.choice(TITLE_HEADS)} {rng.choice(TITLE_TAILS)}",
        show_legend=show_legend,
        show_value_labels=(chart_type == ChartType.BAR and rng.random() < 0.6),
        canvas=rng.choice([(480, 320), (512, 352), (560, 360)]),
        palette=palette,
        rng_seed=seed,
    )


def nice_ceiling(value: float) -> int:
    for k in range(8):
        for base in (10, 20, 40, 50):
            cand = base * 10 ** k
            if cand >= value:
                return cand
    raise ValueError("value out of supported range")


class _Painter:
    """Flat-color painter that tracks which element owns each pixel."""

    def __init__(self, w: int, h: int):
        self.w, self.h = w, h
        self.image = np.zeros((h, w, 4), dtype=np.uint8)
        self.owner = np.zeros((h, w), dtype=np.int32)
        self.count = 0  # 0 is the background owner
        # nominal rects widen a region beyond its set pixels (text draw boxes)
        self.nominal: dict[int, list[tuple[int, int, int, int]]] = {}

    def new_id(self) -> int:
        self.count += 1
        return self.count

    def rect(self, idx: int, x: int, y: int, w: int, h: int, color) -> None:
        x0, y0 = max(x, 0), max(y, 0)
        x1, y1 = min(x + w, self.w), min(y + h, self.h)
        if x0 >= x1 or y0 >= y1:
            return
        self.image[y0:y1, x0:x1] = np.array(color, dtype=np.uint8)
        self.owner[y0:y1, x0:x1] = idx

    def mask(self, idx: int, x: int, y: int, mask: np.ndarray, color) -> None:
        mh, mw = mask.shape
        x0, y0 = max(x, 0), max(y, 0)
        x1, y1 = min(x + mw, self.w), min(y + mh, self.h)
        if x0 >= x1 or y0 >= y1:
            return
        sub = mask[y0 - y:y1 - y, x0 - x:x1 - x]
        region = self.image[y0:y1, x0:x1]
        region[sub] = np.array(color, dtype=np.uint8)
        self.owner[y0:y1, x0:x1][sub] = idx

    def text(self, idx: int, x: int, y: int, content: str, size: float, color) -> None:
        mask = render_text_mask(content, size)
        self.mask(idx, x, y, mask, color)
        mh, mw = mask.shape
        box = (max(x, 0), max(y, 0), min(x + mw, self.w), min(y + mh, self.h))
        self.nominal.setdefault(idx, []).append(box)

    def region_of(self, idx: int) -> Region:
        """Region whose bbox covers set pixels plus any nominal text boxes."""
        mask = self.owner == idx
        ys, xs = np.nonzero(mask)
        if ys.size == 0:
            raise ValueError(f"element {idx} ended with no pixels")
        x0, y0 = int(xs.min()), int(ys.min())
        x1, y1 = int(xs.max()) + 1, int(ys.max()) + 1
        for bx0, by0, bx1, by1 in self.nominal.get(idx, ()):
            x0, y0 = min(x0, bx0), min(y0, by0)
            x1, y1 = max(x1, bx1), max(y1, by1)
        return Region((x0, y0, x1 - x0, y1 - y0), rle_encode(mask[y0:y1, x0:x1]))


def _value_y(v: float, y1: int, plot_h: int, ymax: int) -> int:
    rise = max(1, int((2 * v * plot_h + ymax) // (2 * ymax)))
    return y1 - rise


def render(spec: ChartSpec) -> GroundTruth:
    spec.validate()
    w, h = spec.canvas
    legend_w = LEGEND_BAND if spec.show_legend else 0
    x0, y0 = MARGIN_LEFT, MARGIN_TOP
    x1, y1 = w - MARGIN_RIGHT - legend_w, h - MARGIN_BOTTOM
    plot_w, plot_h = x1 - x0, y1 - y0
    if plot_w < 60 or plot_h < 50:
        raise CanvasTooSmall(f"plot area {plot_w}x{plot_h} cannot hold the layout")

    painter = _Painter(w, h)
    painter.rect(0, 0, 0, w, h, WHITE)
    tree = new_skeleton(spec.chart_type, spec.canvas)
    nodes = tree.nodes
    owners: dict[str, int] = {}
    cats = spec.categories()
    series = spec.series()
    values = {(c, s): v for c, s, v in spec.data}
    series_color = {s: spec.palette[i] for i, s in enumerate(series)}
    cat_color = {c: spec.palette[i % len(spec.palette)] for i, c in enumerate(cats)}

    def add(node: Node, parent: str) -> Node:
        nodes[node.id] = node
        nodes[parent].children.append(node.id)
        owners[node.id] = painter.new_id()
        return node

    # background keeps the reserved owner index 0
    bg = Node("bg", NodeKind.BACKGROUND, style=StyleAttrs(fill_color=WHITE))
    nodes[bg.id] = bg
    nodes["axes"].children.append(bg.id)
    owners[bg.id] = 0
    ref_lines: list[tuple[int, int, int, int]] = []

    ymax = nice_ceiling(max(v for _, _, v in spec.data))
    tick_rows = [(y1, 0), ((y0 + y1) // 2, ymax // 2), (y0, ymax)]

    if spec.gridlines and spec.chart_type != ChartType.PIE:
        for row, _val in tick_rows[1:]:
            painter.rect(owners["bg"], x0, row, plot_w, 1, GRID_COLOR)
            ref_lines.append((x0, row, x1 - 1, row))
        bg.ref_lines = tuple(ref_lines)
        bg.style.stroke_color = GRID_COLOR

    has_axes = spec.chart_type != ChartType.PIE
    if has_axes:
        add(Node("yaxis", NodeKind.Y_AXIS, style=StyleAttrs(stroke_color=AXIS_GRAY)), "axes")
        for ti, (row, val) in enumerate(tick_rows):
            painter.rect(owners["yaxis"], x0 - 5, row - 1, 3, 2, AXIS_GRAY)
            label = str(val)
            tw, _ = text_size(label, 7)
            tick = add(Node(f"yt-{ti:03d}", NodeKind.TICK_LABEL, text=label,
                            style=StyleAttrs(font_size=7, font_color=BLACK)), "yaxis")
            painter.text(owners[tick.id], x0 - 8 - tw, row - 3, label, 7, BLACK)
        painter.rect(owners["yaxis"], x0 - 2, y0 - 2, 2, plot_h + 4, AXIS_GRAY)

        xaxis = add(Node("xaxis", NodeKind.X_AXIS, style=StyleAttrs(stroke_color=AXIS_GRAY)), "axes")
        painter.rect(owners["xaxis"], x0 - 2, y1, plot_w + 4, 2, AXIS_GRAY)
        slot = plot_w // len(cats)
        for ci, cat in enumerate(cats):
            cx = x0 + ci * slot + slot // 2
            painter.rect(owners["xaxis"], cx - 1, y1 + 2, 2, 3, AXIS_GRAY)
            tw, _ = text_size(cat, 7)
            tick = add(Node(f"xt-{ci:03d}", NodeKind.TICK_LABEL, text=cat,
                            style=StyleAttrs(font_size=7, font_color=BLACK)), "xaxis")
            painter.text(owners[tick.id], cx - tw // 2, y1 + 10, cat, 7, BLACK)

    marks: list[Node] = []
    annotations: list[tuple[str, int, int]] = []  # text, x, y

    if spec.chart_type == ChartType.BAR:
        slot = plot_w // len(cats)
        m = len(series)
        bar_w = max(8, (slot * 72 // 100) // m)
        group_w = bar_w * m + 2 * (m - 1)
        if group_w > slot - 2:
            raise CanvasTooSmall("bars do not fit the category slots")
        i = 0
        for ci, cat in enumerate(cats):
            gx = x0 + ci * slot + (slot - group_w) // 2
            for si, ser in enumerate(series):
                v = values[(cat, ser)]
                top = _value_y(v, y1, plot_h, ymax)
                bx = gx + si * (bar_w + 2)
                node = add(Node(f"ge-{i:03d}", NodeKind.GRAPHICAL_ELEMENT, value=v,
                                category=cat,
                                group_key=ser if spec.show_legend else None,
                                style=StyleAttrs(fill_color=series_color[ser])), "marks")
                painter.rect(owners[node.id], bx, top, bar_w, y1 - top, series_color[ser])
                marks.append(node)
                if spec.show_value_labels:
                    label = str(int(v))
                    tw, _ = text_size(label, 7)
                    ty = top - 6 + (8 if (si % 2 == 1 and y1 - top >= 10) else 0)
                    tx = min(max(bx + bar_w // 2 - tw // 2, 0), w - tw)
                    annotations.append((label, tx, max(ty, 0)))
                i += 1

    elif spec.chart_type == ChartType.LINE:
        slot = plot_w // len(cats)
        xs = [x0 + ci * slot + slot // 2 for ci in range(len(cats))]
        for si, ser in enumerate(series):
            pts = []
            for ci, cat in enumerate(cats):
                v = values[(cat, ser)]
                pts.append((xs[ci], _value_y(v, y1, plot_h, ymax), v))
            color = series_color[ser]
            node = add(Node(f"ge-{si:03d}", NodeKind.GRAPHICAL_ELEMENT,
                            group_key=ser if spec.show_legend else None,
                            points=tuple(pts),
                            style=StyleAttrs(fill_color=color)), "marks")
            line = polyline_mask(h, w, [(px, py) for px, py, _ in pts], thickness=3)
            painter.mask(owners[node.id], 0, 0, line, color)
            for px, py, _ in pts:
                painter.rect(owners[node.id], px - 2, py - 2, 5, 5, color)
            marks.append(node)

    else:  # pie
        cx, cy = (x0 + x1) // 2, (y0 + y1) // 2
        r = min(plot_w, plot_h) * 45 // 100
        total = sum(Fraction(v) for _, _, v in spec.data)
        cuts = [Fraction(0)]
        for cat in cats:
            cuts.append(cuts[-1] + Fraction(values[(cat, series[0])]) / total)
        cuts[-1] = Fraction(1)
        slice_map = wedge_slice_map(cx, cy, r, cuts)
        for ci, cat in enumerate(cats):
            v = values[(cat, series[0])]
            node = add(Node(f"ge-{ci:03d}", NodeKind.GRAPHICAL_ELEMENT, value=v,
                            category=cat,
                            group_key=cat if spec.show_legend else None,
                            style=StyleAttrs(fill_color=cat_color[cat])), "marks")
            painter.mask(owners[node.id], cx - r, cy - r, slice_map == ci, cat_color[cat])
            marks.append(node)

    # mark text annotations paint after all marks
    for i, (label, tx, ty) in enumerate(annotations):
        node = add(Node(f"ta-{i:03d}", NodeKind.TEXT_ANNOTATION, text=label,
                        style=StyleAttrs(font_size=7, font_color=BLACK)), "marks")
        painter.text(owners[node.id], tx, ty, label, 7, BLACK)

    # title
    tw, _ = text_size(spec.title, 14)
    title = add(Node("title", NodeKind.TITLE, text=spec.title,
                     style=StyleAttrs(font_size=14, font_color=BLACK)), "annotations")
    painter.text(owners[title.id], (w - tw) // 2, 8, spec.title, 14, BLACK)

    # legend
    legend_links: list[tuple[str, str]] = []
    if spec.show_legend:
        entries = cats if spec.chart_type == ChartType.PIE else series
        entry_color = cat_color if spec.chart_type == ChartType.PIE else series_color
        pad = 5
        max_tw = max(text_size(e, 7)[0] for e in entries)
        box_w = pad + 10 + 4 + max_tw + pad
        box_h = 2 * pad + (len(entries) - 1) * 14 + 8
        lx, ly = x1 + 8, y0 + 4
        legend = add(Node("legend", NodeKind.LEGEND,
                          style=StyleAttrs(stroke_color=FRAME_GRAY)), "annotations")
        lid = owners[legend.id]
        painter.rect(lid, lx, ly, box_w, 1, FRAME_GRAY)
        painter.rect(lid, lx, ly + box_h - 1, box_w, 1, FRAME_GRAY)
        painter.rect(lid, lx, ly, 1, box_h, FRAME_GRAY)
        painter.rect(lid, lx + box_w - 1, ly, 1, box_h, FRAME_GRAY)
        for i, name in enumerate(entries):
            sx, sy = lx + pad, ly + pad + i * 14
            entry = add(Node(f"le-{i:03d}", NodeKind.LEGEND_ENTRY, text=name,
                             swatch_bbox=(sx, sy, 10, 8),
                             style=StyleAttrs(fill_color=entry_color[name],
                                              font_size=7, font_color=BLACK)), "legend")
            painter.rect(owners[entry.id], sx, sy, 10, 8, entry_color[name])
            painter.text(owners[entry.id], sx + 10 + LEGEND_LABEL_GAP, sy, name, 7, BLACK)
            for mark in marks:
                key = mark.category if spec.chart_type == ChartType.PIE else None
                if spec.chart_type != ChartType.PIE:
                    key = mark.group_key
                if key == name:
                    legend_links.append((mark.id, entry.id))

    # regions from the ownership map; bg is the complement of everything else
    for nid, idx in owners.items():
        nodes[nid].region = painter.region_of(idx)

    tree.legend_links = tuple(sorted(legend_links))
    tree.validate()
    return GroundTruth(painter.image, tree)


# -- corpus files -------------------------------------------------------

def write_corpus(out_dir: str | Path, seeds, chart_types=None) -> dict:
    """Write (png, class-mask png, tree json) triples plus a manifest."""
    from .compose import to_png_bytes
    from .decompose.metrics import class_label_map
    from PIL import Image

    chart_types = list(chart_types or ChartType)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    items = []
    for seed in seeds:
        for ctype in chart_types:
            spec = sample_spec(seed, ctype)
            truth = render(spec)
            prefix = f"{ctype.value}_{seed:04d}"
            (out / f"{prefix}.png").write_bytes(to_png_bytes(truth.image))
            labels = class_label_map(truth.tree)
            pal_img = Image.fromarray(labels.astype(np.uint8), mode="P")
            pal = []
            for color in DEFAULT_PALETTE:
                pal.extend(color[:3])
            pal_img.putpalette(pal)
            pal_img.save(out / f"{prefix}_masks.png")
            (out / f"{prefix}_tree.json").write_text(truth.tree.dumps())
            items.append({
                "seed": seed,
                "chart_type": ctype.value,
                "png": f"{prefix}.png",
                "masks": f"{prefix}_masks.png",
                "tree": f"{prefix}_tree.json",
            })
    manifest = {"items": items}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return manifest
