"""RGBA color helpers and CIE76 color difference."""

from __future__ import annotations

RGBA = tuple[int, int, int, int]

BLACK: RGBA = (0, 0, 0, 255)
WHITE: RGBA = (255, 255, 255, 255)
AXIS_GRAY: RGBA = (60, 60, 60, 255)
FRAME_GRAY: RGBA = (120, 120, 120, 255)
BEIGE: RGBA = (245, 245, 220, 255)

# Saturated, pairwise well-separated fills (Delta-E > 20 between any two).
DEFAULT_PALETTE: list[RGBA] = [
    (31, 119, 180, 255),   # blue
    (255, 127, 14, 255),   # orange
    (44, 160, 44, 255),    # green
    (214, 39, 40, 255),    # red
    (148, 103, 189, 255),  # purple
    (140, 86, 75, 255),    # brown
    (227, 119, 194, 255),  # pink
    (188, 189, 34, 255),   # olive
]


def as_rgba(value) -> RGBA:
    """Coerce a 3- or 4-sequence of ints into an RGBA tuple."""
    vals = [int(v) for v in value]
    if len(vals) == 3:
        vals.append(255)
    if len(vals) != 4 or any(v < 0 or v > 255 for v in vals):
        raise ValueError(f"not an RGBA color: {value!r}")
    return (vals[0], vals[1], vals[2], vals[3])


def _srgb_to_linear(c: float) -> float:
    c = c / 255.0
    if c <= 0.04045:
        return c / 12.92
    return ((c + 0.055) / 1.055) ** 2.4


def rgb_to_lab(color) -> tuple[float, float, float]:
    """sRGB (D65) to CIE L*a*b*."""
    r = _srgb_to_linear(color[0])
    g = _srgb_to_linear(color[1])
    b = _srgb_to_linear(color[2])
    x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047
    y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b
    z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883

    def f(t: float) -> float:
        if t > (6 / 29) ** 3:
            return t ** (1 / 3)
        return t / (3 * (6 / 29) ** 2) + 4 / 29

    fx, fy, fz = f(x), f(y), f(z)
    return (116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz))


def delta_e76(a, b) -> float:
    """CIE76 color difference between two RGB(A) colors."""
    la, aa, ba = rgb_to_lab(a)
    lb, ab, bb = rgb_to_lab(b)
    return ((la - lb) ** 2 + (aa - ab) ** 2 + (ba - bb) ** 2) ** 0.5
