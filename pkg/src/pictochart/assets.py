"""Procedural pictorial assets.

The stub generator stands in for a remote image-generation backend: a
stable 64-bit hash of the description picks a silhouette family and
palette, the silhouette is drawn with integer rasterization, then cropped
to its content and stretched so the alpha extent always fills the
requested box.  Identical inputs give byte-identical assets on any
platform.
"""

from __future__ import annotations

import colorsys
import hashlib

import numpy as np

from .overlay import PictorialAsset
from .raster import scale_nearest

_BASE = 64
_SHAPES = ("bottle", "flag", "disc", "diamond", "pennant", "house", "mug", "bar")


def stable_hash64(text: str) -> int:
    """Platform-stable 64-bit hash (never the salted builtin)."""
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")


def _hsv_color(h_deg: int, s_pct: int, v_pct: int) -> tuple[int, int, int, int]:
    r, g, b = colorsys.hsv_to_rgb(h_deg / 360.0, s_pct / 100.0, v_pct / 100.0)
    return (int(r * 255 + 0.5), int(g * 255 + 0.5), int(b * 255 + 0.5), 255)


def _draw_shape(shape: str, w: int, h: int, fill, accent, stripes: int) -> np.ndarray:
    img = np.zeros((h, w, 4), dtype=np.uint8)
    ys, xs = np.mgrid[0:h, 0:w]

    if shape == "bottle":
        neck_w = max(2, w // 3)
        neck_h = h // 3
        body = (ys >= neck_h)
        neck = (abs(2 * xs + 1 - w) <= neck_w) & (ys < neck_h)
        sil = body | neck
    elif shape == "flag":
        sil = np.ones((h, w), dtype=bool)
    elif shape == "disc":
        cx, cy = w, h  # doubled coords
        sil = (2 * xs + 1 - cx) ** 2 * cy * cy + (2 * ys + 1 - cy) ** 2 * cx * cx <= (cx * cy) ** 2 // 1
    elif shape == "diamond":
        sil = abs(2 * xs + 1 - w) * h + abs(2 * ys + 1 - h) * w <= w * h
    elif shape == "pennant":
        sil = abs(2 * ys + 1 - h) * w <= 2 * (w - xs) * h // 2
    elif shape == "house":
        roof = abs(2 * xs + 1 - w) * (h // 2) <= (ys + 1) * w
        sil = (ys >= h // 2) | (roof & (ys < h // 2))
    elif shape == "mug":
        sil = (xs < w * 3 // 4) | ((ys >= h // 4) & (ys < h * 3 // 4))
    else:  # bar
        sil = np.ones((h, w), dtype=bool)

    img[sil] = np.array(fill, dtype=np.uint8)
    band = max(2, h // max(stripes, 1))
    stripe_rows = (ys // band) % 2 == 1
    img[sil & stripe_rows] = np.array(accent, dtype=np.uint8)
    return img


def stub_icon(description: str, box_w: int, box_h: int) -> PictorialAsset:
    """Deterministic icon whose alpha silhouette spans the full box."""
    if box_w <= 0 or box_h <= 0:
        raise ValueError("icon box must be positive")
    seed = stable_hash64(description)
    shape = _SHAPES[seed % len(_SHAPES)]
    hue = (seed >> 8) % 360
    accent_hue = (hue + 120 + (seed >> 20) % 120) % 360
    fill = _hsv_color(hue, 60 + (seed >> 16) % 40, 55 + (seed >> 24) % 40)
    accent = _hsv_color(accent_hue, 50 + (seed >> 32) % 50, 45 + (seed >> 40) % 50)
    stripes = 2 + (seed >> 48) % 5

    # draw at a fixed base size matching the box aspect
    if box_w >= box_h:
        bw, bh = _BASE, max(4, (_BASE * box_h) // box_w)
    else:
        bw, bh = max(4, (_BASE * box_w) // box_h), _BASE
    img = _draw_shape(shape, bw, bh, fill, accent, stripes)

    # crop to content and stretch: the silhouette then touches every edge
    alpha = img[..., 3] > 0
    ys, xs = np.nonzero(alpha)
    img = img[ys.min():ys.max() + 1, xs.min():xs.max() + 1]
    img = scale_nearest(img, box_w, box_h)
    return PictorialAsset.from_array(img, "stub", description)
