"""Deterministic integer rasterizer.

Every pixel decision is made in integer or exact rational arithmetic so
renders are byte-identical across platforms.  Angles for pie wedges come
from a fixed-point sin/cos evaluated with ``fractions.Fraction`` (no libm),
and alpha compositing rounds with explicit integer division.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

# pi to 30 significant digits, exact rational stand-in
_PI = Fraction(314159265358979323846264338328, 10**29)
_DIR_SCALE = 1 << 16


def _sin_cos(x: Fraction) -> tuple[Fraction, Fraction]:
    # Taylor series; |x| <= pi/2 keeps convergence fast.
    sin_acc = Fraction(0)
    cos_acc = Fraction(0)
    term = Fraction(1)
    for n in range(12):
        if n % 2 == 0:
            cos_acc += term if n % 4 == 0 else -term
        term = term * x / (n + 1)
        if n % 2 == 0:
            sin_acc += term if n % 4 == 0 else -term
    return sin_acc, cos_acc


@lru_cache(maxsize=1024)
def direction_for_fraction(num: int, den: int) -> tuple[int, int]:
    """Fixed-point unit vector for a clockwise-from-north turn fraction.

    Fraction 0 points north (0, -SCALE) in screen coordinates (y down);
    0.25 points east, 0.5 south, 0.75 west.
    """
    f = Fraction(num, den) % 1
    # fold into a quadrant so the series argument stays <= pi/2
    quadrant, rem = divmod(f, Fraction(1, 4))
    theta = 2 * _PI * rem
    s, c = _sin_cos(theta)
    # north-clockwise in screen coords: (sin, -cos), rotated per quadrant
    if quadrant == 0:
        dx, dy = s, -c
    elif quadrant == 1:
        dx, dy = c, s
    elif quadrant == 2:
        dx, dy = -s, c
    else:
        dx, dy = -c, -s
    return (int(round(dx * _DIR_SCALE)), int(round(dy * _DIR_SCALE)))


def _quadrant(dx, dy):
    """Clockwise-from-north quadrant index; works on scalars and arrays."""
    q0 = (dx >= 0) & (dy < 0)
    q1 = (dx > 0) & (dy >= 0)
    q2 = (dx <= 0) & (dy > 0)
    return np.where(q0, 0, np.where(q1, 1, np.where(q2, 2, 3)))


def wedge_slice_map(cx: int, cy: int, r: int, cuts: list[Fraction]) -> np.ndarray:
    """Partition the disk of radius r at (cx, cy) into wedges.

    ``cuts`` are the cumulative clockwise-from-north fractions of the slice
    boundaries, starting with 0 and ending with 1.  Returns an int array of
    shape (2r+1, 2r+1) anchored at (cx - r, cy - r): -1 outside the disk,
    otherwise the slice index.  Every disk pixel lands in exactly one slice.
    """
    side = 2 * r + 1
    ys, xs = np.mgrid[0:side, 0:side]
    # doubled coordinates of pixel centers relative to the disk center
    vx = (2 * (xs - r) + 1).astype(np.int64)
    vy = (2 * (ys - r) + 1).astype(np.int64)
    inside = vx * vx + vy * vy <= (2 * r) * (2 * r)

    out = np.full((side, side), -1, dtype=np.int32)
    if len(cuts) < 2:
        return out
    qv = _quadrant(vx, vy)
    rank = np.zeros((side, side), dtype=np.int32)
    for cut in cuts[1:-1]:
        bx, by = direction_for_fraction(cut.numerator, cut.denominator)
        qb = int(_quadrant(np.array(bx), np.array(by)))
        cross = bx * vy - by * vx
        at_or_after = (qv > qb) | ((qv == qb) & (cross >= 0))
        rank += at_or_after.astype(np.int32)
    out[inside] = rank[inside]
    return out


def bresenham(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return points


def polyline_mask(h: int, w: int, points: list[tuple[int, int]], thickness: int = 3) -> np.ndarray:
    """Stamp thickness x thickness squares along Bresenham walks."""
    mask = np.zeros((h, w), dtype=bool)
    off = thickness // 2

    def stamp(px: int, py: int) -> None:
        xa, ya = max(0, px - off), max(0, py - off)
        xb, yb = max(0, px - off + thickness), max(0, py - off + thickness)
        mask[ya:yb, xa:xb] = True

    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        for px, py in bresenham(x0, y0, x1, y1):
            stamp(px, py)
    if len(points) == 1:
        stamp(*points[0])
    return mask


def new_canvas(w: int, h: int) -> np.ndarray:
    return np.zeros((h, w, 4), dtype=np.uint8)


def alpha_over(dst: np.ndarray, src: np.ndarray) -> None:
    """Straight-alpha 'src over dst', in place, with exact integer rounding."""
    sa = src[..., 3].astype(np.int64)
    da = dst[..., 3].astype(np.int64)
    den = sa * 255 + da * (255 - sa)
    out_a = (den + 127) // 255
    safe = np.maximum(den, 1)
    for c in range(3):
        num = src[..., c].astype(np.int64) * sa * 255 + dst[..., c].astype(np.int64) * da * (255 - sa)
        dst[..., c] = np.where(den > 0, (num + safe // 2) // safe, 0).astype(np.uint8)
    dst[..., 3] = out_a.astype(np.uint8)


def clip_rect(x: int, y: int, w: int, h: int, cw: int, ch: int):
    """Intersect a rect with the canvas; returns (x0, y0, x1, y1) or None."""
    x0, y0 = max(x, 0), max(y, 0)
    x1, y1 = min(x + w, cw), min(y + h, ch)
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, y0, x1, y1


def paint_mask(canvas: np.ndarray, x: int, y: int, mask: np.ndarray, color) -> None:
    """Composite a flat color through a boolean mask anchored at (x, y)."""
    ch, cw = canvas.shape[:2]
    mh, mw = mask.shape
    box = clip_rect(x, y, mw, mh, cw, ch)
    if box is None:
        return
    x0, y0, x1, y1 = box
    sub = mask[y0 - y:y1 - y, x0 - x:x1 - x]
    src = np.zeros((y1 - y0, x1 - x0, 4), dtype=np.uint8)
    src[sub] = np.array(color, dtype=np.uint8)
    alpha_over(canvas[y0:y1, x0:x1], src)


def paint_image(canvas: np.ndarray, x: int, y: int, image: np.ndarray) -> None:
    """Alpha-over an RGBA image anchored at (x, y), clipped to the canvas."""
    ch, cw = canvas.shape[:2]
    ih, iw = image.shape[:2]
    box = clip_rect(x, y, iw, ih, cw, ch)
    if box is None:
        return
    x0, y0, x1, y1 = box
    alpha_over(canvas[y0:y1, x0:x1], image[y0 - y:y1 - y, x0 - x:x1 - x])


def scale_nearest(image: np.ndarray, dw: int, dh: int) -> np.ndarray:
    """Nearest-neighbor resize with centered integer sampling."""
    sh, sw = image.shape[:2]
    ys = ((2 * np.arange(dh, dtype=np.int64) + 1) * sh) // (2 * dh)
    xs = ((2 * np.arange(dw, dtype=np.int64) + 1) * sw) // (2 * dw)
    return image[np.ix_(ys, xs)]


def apply_opacity(color, opacity: float):
    """Scale a color's alpha by an opacity in [0, 1] (round half up)."""
    r, g, b, a = color
    return (r, g, b, int(a * opacity + 0.5))
