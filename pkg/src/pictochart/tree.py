"""The chart tree: a hierarchical scene model of a basic chart.

Layout is a fixed three-branch taxonomy under a root node:

    root
      marks         graphical elements, text annotations
      axes          x axis (+ tick labels), y axis (+ tick labels), background
      annotations   title, legend (+ entries), note

Element kinds are the modifiable leaves; the four structural kinds exist so
the taxonomy itself is selectable.  Document order equals render order:
background, axes, marks, mark text, annotations, ties broken by id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .colors import as_rgba
from .errors import UnknownNode
from .masks import rle_count, rle_decode, rle_encode
from .overlay import PictorialAsset, PictorialOverlay


class ChartType(str, Enum):
    BAR = "bar"
    LINE = "line"
    PIE = "pie"


class NodeKind(str, Enum):
    # structural
    ROOT = "root"
    MARKS = "marks"
    AXES = "axes"
    ANNOTATIONS = "annotations"
    # marks branch
    GRAPHICAL_ELEMENT = "graphical_element"
    TEXT_ANNOTATION = "text_annotation"
    # axes branch
    X_AXIS = "x_axis"
    Y_AXIS = "y_axis"
    BACKGROUND = "background"
    TICK_LABEL = "tick_label"
    # annotations branch
    TITLE = "title"
    LEGEND = "legend"
    LEGEND_ENTRY = "legend_entry"
    NOTE = "note"


STRUCTURAL_KINDS = frozenset({NodeKind.ROOT, NodeKind.MARKS, NodeKind.AXES, NodeKind.ANNOTATIONS})

# the modifiable element taxonomy; also the class set for segmentation scoring
ELEMENT_KINDS = (
    NodeKind.GRAPHICAL_ELEMENT,
    NodeKind.TEXT_ANNOTATION,
    NodeKind.X_AXIS,
    NodeKind.Y_AXIS,
    NodeKind.BACKGROUND,
    NodeKind.TITLE,
    NodeKind.LEGEND,
    NodeKind.NOTE,
)

TEXT_KINDS = frozenset({
    NodeKind.TEXT_ANNOTATION, NodeKind.TITLE, NodeKind.NOTE,
    NodeKind.TICK_LABEL, NodeKind.LEGEND_ENTRY,
})

_BRANCH_OF = {
    NodeKind.GRAPHICAL_ELEMENT: NodeKind.MARKS,
    NodeKind.TEXT_ANNOTATION: NodeKind.MARKS,
    NodeKind.X_AXIS: NodeKind.AXES,
    NodeKind.Y_AXIS: NodeKind.AXES,
    NodeKind.BACKGROUND: NodeKind.AXES,
    NodeKind.TITLE: NodeKind.ANNOTATIONS,
    NodeKind.LEGEND: NodeKind.ANNOTATIONS,
    NodeKind.NOTE: NodeKind.ANNOTATIONS,
}

_Z_CLASS = {
    NodeKind.BACKGROUND: 0,
    NodeKind.X_AXIS: 1,
    NodeKind.Y_AXIS: 1,
    NodeKind.TICK_LABEL: 2,
    NodeKind.GRAPHICAL_ELEMENT: 3,
    NodeKind.TEXT_ANNOTATION: 4,
    NodeKind.TITLE: 5,
    NodeKind.LEGEND: 5,
    NodeKind.LEGEND_ENTRY: 6,
    NodeKind.NOTE: 5,
}


@dataclass(frozen=True)
class Region:
    """Integer bbox plus an RLE bitmap aligned to it."""

    bbox: tuple[int, int, int, int]  # x, y, w, h
    rle: tuple[int, ...]

    @property
    def mask(self) -> np.ndarray:
        return rle_decode(self.rle, self.bbox[3], self.bbox[2])

    @property
    def pixel_count(self) -> int:
        return rle_count(self.rle)

    def canvas_mask(self, w: int, h: int) -> np.ndarray:
        """Mask expanded to full canvas coordinates."""
        out = np.zeros((h, w), dtype=bool)
        x, y, bw, bh = self.bbox
        out[y:y + bh, x:x + bw] = self.mask
        return out

    @classmethod
    def from_mask(cls, mask: np.ndarray, origin: tuple[int, int] = (0, 0)) -> "Region":
        """Tight region around the set pixels of ``mask`` placed at ``origin``."""
        ys, xs = np.nonzero(mask)
        if ys.size == 0:
            raise ValueError("region mask needs at least one set pixel")
        y0, y1 = int(ys.min()), int(ys.max()) + 1
        x0, x1 = int(xs.min()), int(xs.max()) + 1
        sub = mask[y0:y1, x0:x1]
        return cls((origin[0] + x0, origin[1] + y0, x1 - x0, y1 - y0), rle_encode(sub))

    @classmethod
    def from_rect(cls, x: int, y: int, w: int, h: int) -> "Region":
        return cls((x, y, w, h), rle_encode(np.ones((h, w), dtype=bool)))


@dataclass
class StyleAttrs:
    fill_color: tuple[int, int, int, int] | None = None
    stroke_color: tuple[int, int, int, int] | None = None
    font_size: float | None = None
    font_color: tuple[int, int, int, int] | None = None
    opacity: float = 1.0
    position_offset: tuple[int, int] = (0, 0)

    def copy(self) -> "StyleAttrs":
        return replace(self)

    def to_json(self) -> dict:
        out: dict = {}
        if self.fill_color is not None:
            out["fill_color"] = list(self.fill_color)
        if self.stroke_color is not None:
            out["stroke_color"] = list(self.stroke_color)
        if self.font_size is not None:
            out["font_size"] = self.font_size
        if self.font_color is not None:
            out["font_color"] = list(self.font_color)
        if self.opacity != 1.0:
            out["opacity"] = self.opacity
        if self.position_offset != (0, 0):
            out["position_offset"] = list(self.position_offset)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "StyleAttrs":
        def color(key):
            return as_rgba(data[key]) if data.get(key) is not None else None

        return cls(
            fill_color=color("fill_color"),
            stroke_color=color("stroke_color"),
            font_size=data.get("font_size"),
            font_color=color("font_color"),
            opacity=data.get("opacity", 1.0),
            position_offset=tuple(data.get("position_offset", (0, 0))),
        )


@dataclass
class Node:
    id: str
    kind: NodeKind
    region: Region | None = None
    style: StyleAttrs = field(default_factory=StyleAttrs)
    text: str | None = None
    value: float | None = None
    category: str | None = None
    group_key: str | None = None
    children: list[str] = field(default_factory=list)
    overlay: PictorialOverlay | None = None
    # polyline marks: ordered (x, y, value) data points
    points: tuple[tuple[int, int, float], ...] | None = None
    # legend entries: the color swatch sub-rect inside the region
    swatch_bbox: tuple[int, int, int, int] | None = None
    # backgrounds: reference-line segments (x0, y0, x1, y1), kept on top of swaps
    ref_lines: tuple[tuple[int, int, int, int], ...] | None = None

    def to_json(self) -> dict:
        out: dict = {"id": self.id, "kind": self.kind.value, "children": list(self.children)}
        if self.region is not None:
            out["bbox"] = list(self.region.bbox)
            out["mask_rle"] = list(self.region.rle)
        style = self.style.to_json()
        if style:
            out["style"] = style
        for key, val in (("text", self.text), ("value", self.value),
                         ("category", self.category), ("group_key", self.group_key)):
            if val is not None:
                out[key] = val
        if self.overlay is not None:
            out["overlay"] = self.overlay.to_json()
        if self.points is not None:
            out["points"] = [list(p) for p in self.points]
        if self.swatch_bbox is not None:
            out["swatch_bbox"] = list(self.swatch_bbox)
        if self.ref_lines is not None:
            out["ref_lines"] = [list(seg) for seg in self.ref_lines]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Node":
        region = None
        if data.get("bbox") is not None:
            region = Region(tuple(data["bbox"]), tuple(data.get("mask_rle", ())))
        return cls(
            id=data["id"],
            kind=NodeKind(data["kind"]),
            region=region,
            style=StyleAttrs.from_json(data.get("style", {})),
            text=data.get("text"),
            value=data.get("value"),
            category=data.get("category"),
            group_key=data.get("group_key"),
            children=list(data.get("children", [])),
            overlay=PictorialOverlay.from_json(data["overlay"]) if data.get("overlay") else None,
            points=tuple(tuple(p) for p in data["points"]) if data.get("points") else None,
            swatch_bbox=tuple(data["swatch_bbox"]) if data.get("swatch_bbox") else None,
            ref_lines=tuple(tuple(s) for s in data["ref_lines"]) if data.get("ref_lines") else None,
        )


@dataclass
class ChartTree:
    chart_type: ChartType
    canvas: tuple[int, int]  # (w, h)
    root: str
    nodes: dict[str, Node]
    legend_links: tuple[tuple[str, str], ...] = ()
    assets: dict[str, PictorialAsset] = field(default_factory=dict)

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def parent_of(self, node_id: str) -> str | None:
        for nid, node in self.nodes.items():
            if node_id in node.children:
                return nid
        return None

    def descendants(self, node_id: str) -> list[str]:
        """Preorder descendant ids, not including the node itself."""
        out: list[str] = []
        stack = list(reversed(self.node(node_id).children))
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(reversed(self.node(nid).children))
        return out

    def leaves(self) -> list[Node]:
        return [n for n in self.nodes.values() if n.kind not in STRUCTURAL_KINDS]

    def document_order(self) -> list[str]:
        """Render order: z class, then id, over non-structural nodes."""
        return [n.id for n in sorted(self.leaves(), key=lambda n: (_Z_CLASS[n.kind], n.id))]

    def kind_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self.leaves():
            counts[node.kind.value] = counts.get(node.kind.value, 0) + 1
        return counts

    def first_of_kind(self, kind: NodeKind) -> Node | None:
        for nid in self.document_order():
            if self.nodes[nid].kind == kind:
                return self.nodes[nid]
        return None

    # -- validation ----------------------------------------------------

    def validate(self) -> None:
        w, h = self.canvas
        if w < 16 or h < 16:
            raise ValueError("canvas must be at least 16x16")
        if self.root not in self.nodes:
            raise ValueError(f"root {self.root!r} does not resolve")
        seen: set[str] = set()
        stack = [self.root]
        while stack:
            nid = stack.pop()
            if nid in seen:
                raise ValueError(f"node {nid!r} reached twice (cycle or shared child)")
            seen.add(nid)
            node = self.nodes.get(nid)
            if node is None:
                raise ValueError(f"child id {nid!r} does not resolve")
            if node.id != nid:
                raise ValueError(f"node id mismatch for {nid!r}")
            stack.extend(node.children)
        if seen != set(self.nodes):
            orphans = set(self.nodes) - seen
            raise ValueError(f"orphan nodes not reachable from root: {sorted(orphans)}")
        for node in self.nodes.values():
            self._validate_node(node)
        entry_ids = {n.id for n in self.nodes.values() if n.kind == NodeKind.LEGEND_ENTRY}
        for mark_id, entry_id in self.legend_links:
            if self.node(mark_id).kind != NodeKind.GRAPHICAL_ELEMENT:
                raise ValueError(f"legend link source {mark_id!r} is not a graphical element")
            if entry_id not in entry_ids:
                raise ValueError(f"legend link target {entry_id!r} is not a legend entry")

    def _validate_node(self, node: Node) -> None:
        w, h = self.canvas
        if node.kind in STRUCTURAL_KINDS:
            return
        if node.region is None:
            raise ValueError(f"element node {node.id!r} has no region")
        x, y, bw, bh = node.region.bbox
        if bw <= 0 or bh <= 0 or x < 0 or y < 0 or x + bw > w or y + bh > h:
            raise ValueError(f"node {node.id!r} bbox {node.region.bbox} outside canvas")
        if sum(node.region.rle) != bw * bh:
            raise ValueError(f"node {node.id!r} mask does not match bbox size")
        if node.region.pixel_count < 1:
            raise ValueError(f"node {node.id!r} mask is empty")
        if node.kind in TEXT_KINDS and not node.text:
            raise ValueError(f"{node.kind.value} node {node.id!r} requires text")
        if not 0.0 <= node.style.opacity <= 1.0:
            raise ValueError(f"node {node.id!r} opacity out of range")
        if node.style.font_size is not None and node.style.font_size <= 0:
            raise ValueError(f"node {node.id!r} font_size must be positive")

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        order = [self.root] + self.descendants(self.root)
        out: dict = {
            "chart_type": self.chart_type.value,
            "canvas": {"w": self.canvas[0], "h": self.canvas[1]},
            "nodes": [self.nodes[nid].to_json() for nid in order],
            "legend_links": [list(pair) for pair in self.legend_links],
        }
        if self.assets:
            out["assets"] = {aid: a.to_json() for aid, a in sorted(self.assets.items())}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ChartTree":
        nodes = {}
        for item in data["nodes"]:
            node = Node.from_json(item)
            nodes[node.id] = node
        referenced = {cid for node in nodes.values() for cid in node.children}
        roots = [nid for nid in nodes if nid not in referenced]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {roots}")
        return cls(
            chart_type=ChartType(data["chart_type"]),
            canvas=(data["canvas"]["w"], data["canvas"]["h"]),
            root=roots[0],
            nodes=nodes,
            legend_links=tuple(tuple(pair) for pair in data.get("legend_links", [])),
            assets={aid: PictorialAsset.from_json(a) for aid, a in data.get("assets", {}).items()},
        )

    def dumps(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def loads(cls, text: str) -> "ChartTree":
        return cls.from_json(json.loads(text))


def branch_for_kind(kind: NodeKind) -> NodeKind:
    return _BRANCH_OF[kind]


def z_class(kind: NodeKind) -> int:
    return _Z_CLASS[kind]


def new_skeleton(chart_type: ChartType, canvas: tuple[int, int]) -> ChartTree:
    """Tree with the root and the three empty branches."""
    nodes = {
        "root": Node("root", NodeKind.ROOT, children=["marks", "axes", "annotations"]),
        "marks": Node("marks", NodeKind.MARKS),
        "axes": Node("axes", NodeKind.AXES),
        "annotations": Node("annotations", NodeKind.ANNOTATIONS),
    }
    return ChartTree(chart_type, canvas, "root", nodes)
