"""Render a chart tree back to pixels.

Paint order is the tree's document order (background, axes, marks with
their overlays, mark text, annotations).  Text nodes are re-rendered from
the embedded font rather than repainted from their masks, so style edits
(font size, color, offsets) take effect; everything else paints its stored
mask.  Output is deterministic: same tree, same bytes.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .colors import BLACK
from .font import render_text_mask
from .overlay import PictorialOverlay
from .raster import new_canvas, paint_image, paint_mask, polyline_mask, scale_nearest
from .tree import ChartTree, Node, NodeKind

_TEXTUAL = (NodeKind.TICK_LABEL, NodeKind.TEXT_ANNOTATION, NodeKind.TITLE, NodeKind.NOTE)

# gap between a legend swatch and its label, shared with the chart generator
LEGEND_LABEL_GAP = 4


def _factor(opacity: float) -> int:
    return max(0, min(255, int(opacity * 255 + 0.5)))


def _modulate(img: np.ndarray, factor: int) -> np.ndarray:
    if factor >= 255:
        return img
    out = img.copy()
    out[..., 3] = ((out[..., 3].astype(np.int32) * factor) + 127) // 255
    return out


def _mod_color(color, factor: int):
    r, g, b, a = color
    return (r, g, b, ((a * factor) + 127) // 255)


def _paint_placements(canvas: np.ndarray, tree: ChartTree, overlay: PictorialOverlay,
                      factor: int) -> None:
    for placement in overlay.placements:
        asset = tree.assets.get(placement.asset_id)
        if asset is None:
            continue
        x, y, w, h = placement.rect
        if w <= 0 or h <= 0:
            continue
        img = np.array(scale_nearest(asset.array, w, h))
        if overlay.pattern is not None and overlay.pattern.kind == "area":
            visible = int(placement.clip_fraction * h + 0.5)
            cut = h - visible
            if cut > 0:
                if overlay.pattern.fill_style == "clip":
                    img[:cut, :, 3] = 0
                else:
                    top = img[:cut]
                    luma = ((top[..., 0].astype(np.int32) * 299
                             + top[..., 1].astype(np.int32) * 587
                             + top[..., 2].astype(np.int32) * 114) // 1000)
                    top[..., 0] = luma
                    top[..., 1] = luma
                    top[..., 2] = luma
                    top[..., 3] = top[..., 3] // 4
        paint_image(canvas, x, y, _modulate(img, factor))


def _draw_node_text(canvas: np.ndarray, node: Node, factor: int) -> None:
    if not node.text:
        return
    size = node.style.font_size or 7
    mask = render_text_mask(node.text, size)
    x, y, _, _ = node.region.bbox
    dx, dy = node.style.position_offset
    color = _mod_color(node.style.font_color or BLACK, factor)
    paint_mask(canvas, x + dx, y + dy, mask, color)


def _paint_background(canvas: np.ndarray, tree: ChartTree, node: Node, factor: int) -> None:
    h, w = canvas.shape[:2]
    if node.overlay is not None:
        _paint_placements(canvas, tree, node.overlay, factor)
    elif node.style.fill_color is not None:
        src = np.zeros((h, w, 4), dtype=np.uint8)
        src[:] = np.array(_mod_color(node.style.fill_color, factor), dtype=np.uint8)
        paint_image(canvas, 0, 0, src)
    if node.ref_lines:
        color = _mod_color(node.style.stroke_color or BLACK, factor)
        for x0, y0, x1, y1 in node.ref_lines:
            seg = polyline_mask(h, w, [(x0, y0), (x1, y1)], thickness=1)
            paint_mask(canvas, 0, 0, seg, color)


def paint_node(canvas: np.ndarray, tree: ChartTree, node: Node) -> None:
    factor = _factor(node.style.opacity)
    if factor == 0 or node.region is None:
        return
    x, y, _, _ = node.region.bbox

    if node.kind == NodeKind.BACKGROUND:
        _paint_background(canvas, tree, node, factor)
        return

    if node.kind in (NodeKind.X_AXIS, NodeKind.Y_AXIS):
        color = node.style.stroke_color or node.style.fill_color or BLACK
        paint_mask(canvas, x, y, node.region.mask, _mod_color(color, factor))
        return

    if node.kind in _TEXTUAL:
        if node.overlay is not None:
            _paint_placements(canvas, tree, node.overlay, factor)
        else:
            _draw_node_text(canvas, node, factor)
        return

    if node.kind == NodeKind.GRAPHICAL_ELEMENT:
        suppress = (node.overlay is not None and node.overlay.pattern is not None
                    and node.overlay.pattern.kind == "height")
        if not suppress and node.style.fill_color is not None:
            paint_mask(canvas, x, y, node.region.mask, _mod_color(node.style.fill_color, factor))
        if node.overlay is not None:
            _paint_placements(canvas, tree, node.overlay, factor)
        return

    if node.kind == NodeKind.LEGEND:
        color = node.style.stroke_color or node.style.fill_color or BLACK
        paint_mask(canvas, x, y, node.region.mask, _mod_color(color, factor))
        return

    if node.kind == NodeKind.LEGEND_ENTRY:
        if node.swatch_bbox is not None and node.style.fill_color is not None:
            sx, sy, sw, sh = node.swatch_bbox
            paint_mask(canvas, sx, sy, np.ones((sh, sw), dtype=bool),
                       _mod_color(node.style.fill_color, factor))
        label_anchor = _entry_label_anchor(node)
        if label_anchor is not None and node.text:
            lx, ly = label_anchor
            dx, dy = node.style.position_offset
            mask = render_text_mask(node.text, node.style.font_size or 7)
            paint_mask(canvas, lx + dx, ly + dy, mask,
                       _mod_color(node.style.font_color or BLACK, factor))
        return


def _entry_label_anchor(node: Node) -> tuple[int, int] | None:
    """Label top-left: fixed gap right of the swatch, aligned to its top."""
    if node.swatch_bbox is not None:
        sx, sy, sw, _ = node.swatch_bbox
        return (sx + sw + LEGEND_LABEL_GAP, sy)
    if node.region is not None:
        x0, y0, _, _ = node.region.bbox
        return (x0, y0)
    return None


def composite(tree: ChartTree) -> np.ndarray:
    """Paint the whole tree onto a fresh RGBA canvas."""
    w, h = tree.canvas
    canvas = new_canvas(w, h)
    for nid in tree.document_order():
        paint_node(canvas, tree, tree.nodes[nid])
    return canvas


def to_png_bytes(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def png_to_array(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as img:
        return np.array(img.convert("RGBA"))
