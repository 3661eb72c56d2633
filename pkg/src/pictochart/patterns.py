"""The four pictorial integration patterns plus axis and background swaps.

All functions mutate the given tree's target nodes in place (callers that
need copy-on-write semantics go through :func:`pictochart.edits.apply_edit`)
and return the tree.  Applied patterns are stored as overlays on the nodes,
never baked into pixels, so undo and re-layout stay exact.
"""

from __future__ import annotations

import math
import warnings as _warnings

import numpy as np

from . import errors
from .overlay import DesignPattern, PictorialAsset, PictorialOverlay, Placement
from .tree import ChartTree, ChartType, Node, NodeKind

SEMANTIC_ICON_CAP = 32
LINE_POINT_ICON = 24
RECT_FILL_THRESHOLD = 0.9
DISTORTION_RATIO = 3.0
UNIT_GAP = 2
UNIT_MIN_ICON = 4


def round_half_away(x: float) -> int:
    """Rounding used for unit counts: 2.5 -> 3, not banker's 2."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def is_rect_like(node: Node) -> bool:
    if node.region is None or node.points is not None:
        return False
    _, _, w, h = node.region.bbox
    return node.region.pixel_count >= RECT_FILL_THRESHOLD * w * h


def register_asset(tree: ChartTree, asset: PictorialAsset) -> str:
    aid = asset.content_id()
    tree.assets.setdefault(aid, asset)
    return aid


def _fit(nw: int, nh: int, box_w: int, box_h: int) -> tuple[int, int]:
    """Largest aspect-preserving size inside box_w x box_h."""
    if nw * box_h >= nh * box_w:
        w = box_w
        h = max(1, (nh * box_w * 2 + nw) // (2 * nw))
    else:
        h = box_h
        w = max(1, (nw * box_h * 2 + nh) // (2 * nh))
    return w, h


def _clamp_rect(rect, canvas):
    x, y, w, h = rect
    cw, ch = canvas
    nx = min(max(x, 0), max(cw - w, 0))
    ny = min(max(y, 0), max(ch - h, 0))
    clamped = (nx, ny, w, h) != (x, y, w, h)
    return (nx, ny, w, h), clamped


def mask_centroid(node: Node) -> tuple[int, int]:
    """Integer centroid of the region mask, snapped onto the mask."""
    mask = node.region.mask
    ys, xs = np.nonzero(mask)
    cx = int(np.round(xs.mean()))
    cy = int(np.round(ys.mean()))
    if not mask[cy, cx]:
        d2 = (xs - cx) ** 2 + (ys - cy) ** 2
        best = int(np.lexsort((xs, ys, d2))[0])
        cx, cy = int(xs[best]), int(ys[best])
    x0, y0, _, _ = node.region.bbox
    return x0 + cx, y0 + cy


def _targets(tree: ChartTree, target_ids) -> list[Node]:
    return [tree.node(t) for t in target_ids]


def apply_semantic(tree: ChartTree, target_ids, asset: PictorialAsset) -> ChartTree:
    """Anchor one icon per mark (per data point for polyline marks)."""
    aid = register_asset(tree, asset)
    pattern = DesignPattern("semantic")
    for node in _targets(tree, target_ids):
        if node.kind != NodeKind.GRAPHICAL_ELEMENT:
            raise errors.InvalidAction(f"semantic pattern targets marks, not {node.kind.value}")
        warn_tags: list[str] = []
        placements = []
        if node.points is not None:
            s = LINE_POINT_ICON
            for px, py, _ in node.points:
                w, h = _fit(asset.width, asset.height, s, s)
                rect, clamped = _clamp_rect((px - w // 2, py - h // 2, w, h), tree.canvas)
                if clamped:
                    warn_tags.append("anchor-out-of-canvas")
                placements.append(Placement(aid, rect))
        elif is_rect_like(node):
            x, y, bw, bh = node.region.bbox
            s = max(1, min(int(0.8 * bw), SEMANTIC_ICON_CAP))
            w, h = _fit(asset.width, asset.height, s, s)
            rect, clamped = _clamp_rect((x + bw // 2 - w // 2, y - h, w, h), tree.canvas)
            if clamped:
                warn_tags.append("anchor-out-of-canvas")
            placements.append(Placement(aid, rect))
        else:
            cx, cy = mask_centroid(node)
            _, _, bw, bh = node.region.bbox
            s = max(1, min(int(0.8 * min(bw, bh)), SEMANTIC_ICON_CAP))
            w, h = _fit(asset.width, asset.height, s, s)
            rect, clamped = _clamp_rect((cx - w // 2, cy - h // 2, w, h), tree.canvas)
            if clamped:
                warn_tags.append("anchor-out-of-canvas")
            placements.append(Placement(aid, rect))
        if warn_tags:
            _warnings.warn("semantic anchor clamped inside canvas", errors.AnchorOutOfCanvas)
        node.overlay = PictorialOverlay("mark", tuple(placements), pattern, aid, tuple(warn_tags))
    return tree


def pack_unit_icons(mask: np.ndarray, count: int, size: int) -> list[tuple[int, int]]:
    """Greedy bottom-up row-major packing of size x size squares.

    Positions are local to the mask; every square lies fully on set pixels
    and at least UNIT_GAP apart from squares in the same pass.
    """
    h, w = mask.shape
    if size > min(h, w):
        return []
    ii = np.zeros((h + 1, w + 1), dtype=np.int64)
    ii[1:, 1:] = np.cumsum(np.cumsum(mask.astype(np.int64), axis=0), axis=1)

    def fits(x: int, y: int) -> bool:
        total = ii[y + size, x + size] - ii[y, x + size] - ii[y + size, x] + ii[y, x]
        return total == size * size

    out: list[tuple[int, int]] = []
    y = h - size
    while y >= 0 and len(out) < count:
        x = 0
        while x + size <= w and len(out) < count:
            if fits(x, y):
                out.append((x, y))
                x += size + UNIT_GAP
            else:
                x += 1
        y -= size + UNIT_GAP
    return out


def apply_unit(tree: ChartTree, target_ids, asset: PictorialAsset, unit_value: float) -> ChartTree:
    """Tile round_half_away(value / unit) icons inside each mark's mask."""
    if unit_value <= 0:
        raise errors.InvalidAction("unit_value must be positive")
    aid = register_asset(tree, asset)
    pattern = DesignPattern("unit", unit_value=unit_value)
    for node in _targets(tree, target_ids):
        if node.kind != NodeKind.GRAPHICAL_ELEMENT or node.value is None:
            raise errors.InvalidAction("unit pattern requires marks with a data value")
        count = round_half_away(node.value / unit_value)
        if node.value > 0:
            count = max(count, 1)
        mask = node.region.mask
        x0, y0, bw, bh = node.region.bbox

        lo, hi = UNIT_MIN_ICON, min(bw, bh)
        best: list[tuple[int, int]] | None = None
        best_s = 0
        while lo <= hi:
            mid = (lo + hi) // 2
            placed = pack_unit_icons(mask, count, mid)
            if len(placed) >= count:
                best, best_s = placed, mid
                lo = mid + 1
            else:
                hi = mid - 1
        warn_tags: tuple[str, ...] = ()
        if best is None:
            best = pack_unit_icons(mask, count, UNIT_MIN_ICON)
            best_s = UNIT_MIN_ICON
            warn_tags = ("cannot-pack",)
            _warnings.warn(
                f"only {len(best)}/{count} unit icons fit in mark {node.id}",
                errors.CannotPack,
            )
            if not best:
                raise errors.InvalidAction(f"mark {node.id} cannot hold any unit icon")
        placements = tuple(
            Placement(aid, (x0 + px, y0 + py, best_s, best_s)) for px, py in best
        )
        node.overlay = PictorialOverlay("mark", placements, pattern, aid, warn_tags)
    return tree


def apply_height(tree: ChartTree, target_ids, asset: PictorialAsset) -> ChartTree:
    """Stretch the icon over each rect-like mark; the mark fill is suppressed."""
    aid = register_asset(tree, asset)
    pattern = DesignPattern("height")
    for node in _targets(tree, target_ids):
        if node.kind != NodeKind.GRAPHICAL_ELEMENT or not is_rect_like(node):
            raise errors.NotRectLike(f"height pattern needs a rect-like mark, got {node.id}")
        x, y, bw, bh = node.region.bbox
        ratio = (bw * asset.height) / (bh * asset.width)
        warn_tags: tuple[str, ...] = ()
        if ratio > DISTORTION_RATIO or ratio < 1.0 / DISTORTION_RATIO:
            warn_tags = ("distortion",)
            _warnings.warn(
                f"stretch distorts aspect {ratio:.2f}:1 on mark {node.id}",
                errors.DistortionWarning,
            )
        node.overlay = PictorialOverlay(
            "mark", (Placement(aid, (x, y, bw, bh)),), pattern, aid, warn_tags
        )
    return tree


def _area_reference_total(tree: ChartTree, targets: list[Node]) -> float:
    values: list[float] = []
    for node in tree.leaves():
        if node.kind != NodeKind.GRAPHICAL_ELEMENT:
            continue
        if node.value is not None:
            values.append(node.value)
        if node.points is not None:
            values.extend(p[2] for p in node.points)
    if not values:
        raise errors.ZeroTotal("no data values to derive a reference total")
    total = sum(values) if tree.chart_type == ChartType.PIE else max(values)
    if total <= 0:
        raise errors.ZeroTotal("reference total is zero")
    return total


def _area_icon_size(tree: ChartTree, targets: list[Node]) -> int:
    sizes = []
    for node in targets:
        if node.points is not None:
            sizes.append(LINE_POINT_ICON)
        else:
            _, _, bw, bh = node.region.bbox
            sizes.append(min(bw, bh))
    s = max(UNIT_MIN_ICON, min(sizes))
    if tree.chart_type == ChartType.PIE:
        # keep icons near wedge centroids clear of the outer rim
        disk_px = sum(n.region.pixel_count for n in tree.leaves()
                      if n.kind == NodeKind.GRAPHICAL_ELEMENT and n.region is not None)
        r_est = math.isqrt(max(disk_px, 1) * 7 // 22)
        s = min(s, max(8, r_est * 18 // 100))
    return s


def apply_area(tree: ChartTree, target_ids, asset: PictorialAsset,
               fill_style: str | None = None) -> ChartTree:
    """Uniform icons filled proportionally to value / reference total."""
    targets = _targets(tree, target_ids)
    for node in targets:
        if node.kind != NodeKind.GRAPHICAL_ELEMENT:
            raise errors.InvalidAction("area pattern targets marks")
        if node.value is None and node.points is None:
            raise errors.InvalidAction(f"area pattern requires a data value on {node.id}")
    if fill_style is None:
        fill_style = "clip" if tree.chart_type == ChartType.PIE else "color-fill"
    total = _area_reference_total(tree, targets)
    s = _area_icon_size(tree, targets)
    aid = register_asset(tree, asset)
    pattern = DesignPattern("area", fill_style=fill_style)
    for node in targets:
        placements = []
        if node.points is not None:
            for px, py, pv in node.points:
                rect, _ = _clamp_rect((px - s // 2, py - s // 2, s, s), tree.canvas)
                placements.append(Placement(aid, rect, min(1.0, pv / total)))
        elif is_rect_like(node):
            x, y, bw, bh = node.region.bbox
            rect, _ = _clamp_rect((x + bw // 2 - s // 2, y + bh - s, s, s), tree.canvas)
            placements.append(Placement(aid, rect, min(1.0, node.value / total)))
        else:
            cx, cy = mask_centroid(node)
            rect, _ = _clamp_rect((cx - s // 2, cy - s // 2, s, s), tree.canvas)
            placements.append(Placement(aid, rect, min(1.0, node.value / total)))
        node.overlay = PictorialOverlay("mark", tuple(placements), pattern, aid)
    return tree


def replace_tick_labels(tree: ChartTree, axis_id: str,
                        assets: dict[str, PictorialAsset]) -> ChartTree:
    """Swap matched tick-label text for icons scaled to the label height."""
    axis = tree.node(axis_id)
    if axis.kind not in (NodeKind.X_AXIS, NodeKind.Y_AXIS):
        raise errors.InvalidAction("tick replacement targets an axis node")
    for child_id in axis.children:
        child = tree.node(child_id)
        if child.kind != NodeKind.TICK_LABEL or child.text not in assets:
            continue
        asset = assets[child.text]
        aid = register_asset(tree, asset)
        x, y, bw, bh = child.region.bbox
        w = max(1, (asset.width * bh * 2 + asset.height) // (2 * asset.height))
        rect, _ = _clamp_rect((x + bw // 2 - w // 2, y, w, bh), tree.canvas)
        child.overlay = PictorialOverlay("tick", (Placement(aid, rect),), None, aid)
    return tree


def replace_background(tree: ChartTree, asset: PictorialAsset) -> ChartTree:
    """Cover the canvas with the asset; reference lines stay on top."""
    bg = tree.first_of_kind(NodeKind.BACKGROUND)
    if bg is None:
        raise errors.InvalidAction("tree has no background node")
    cw, ch = tree.canvas
    nw, nh = asset.width, asset.height
    if nw * ch >= nh * cw:
        dh = ch
        dw = max(cw, (nw * ch * 2 + nh) // (2 * nh))
    else:
        dw = cw
        dh = max(ch, (nh * cw * 2 + nw) // (2 * nw))
    rect = ((cw - dw) // 2, (ch - dh) // 2, dw, dh)
    aid = register_asset(tree, asset)
    bg.overlay = PictorialOverlay("background", (Placement(aid, rect),), None, aid)
    return tree
