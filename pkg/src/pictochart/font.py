"""Embedded 5x7 bitmap font.

All chart text (ground truth and composited output) is rendered from this
single font with integer scaling, so text pixels are reproducible without
any OCR engine or system font.  Lowercase input is folded to uppercase;
unsupported characters render as a filled box.
"""

from __future__ import annotations

import numpy as np

GLYPH_W = 5
GLYPH_H = 7
ADVANCE = 6  # glyph width + 1 column gap

_RAW = {
    "A": ".###.|#...#|#...#|#####|#...#|#...#|#...#",
    "B": "####.|#...#|#...#|####.|#...#|#...#|####.",
    "C": ".###.|#...#|#....|#....|#....|#...#|.###.",
    "D": "####.|#...#|#...#|#...#|#...#|#...#|####.",
    "E": "#####|#....|#....|####.|#....|#....|#####",
    "F": "#####|#....|#....|####.|#....|#....|#....",
    "G": ".###.|#...#|#....|#.###|#...#|#...#|.###.",
    "H": "#...#|#...#|#...#|#####|#...#|#...#|#...#",
    "I": ".###.|..#..|..#..|..#..|..#..|..#..|.###.",
    "J": "..###|...#.|...#.|...#.|...#.|#..#.|.##..",
    "K": "#...#|#..#.|#.#..|##...|#.#..|#..#.|#...#",
    "L": "#....|#....|#....|#....|#....|#....|#####",
    "M": "#...#|##.##|#.#.#|#.#.#|#...#|#...#|#...#",
    "N": "#...#|##..#|#.#.#|#..##|#...#|#...#|#...#",
    "O": ".###.|#...#|#...#|#...#|#...#|#...#|.###.",
    "P": "####.|#...#|#...#|####.|#....|#....|#....",
    "Q": ".###.|#...#|#...#|#...#|#.#.#|#..#.|.##.#",
    "R": "####.|#...#|#...#|####.|#.#..|#..#.|#...#",
    "S": ".####|#....|#....|.###.|....#|....#|####.",
    "T": "#####|..#..|..#..|..#..|..#..|..#..|..#..",
    "U": "#...#|#...#|#...#|#...#|#...#|#...#|.###.",
    "V": "#...#|#...#|#...#|#...#|#...#|.#.#.|..#..",
    "W": "#...#|#...#|#...#|#.#.#|#.#.#|##.##|#...#",
    "X": "#...#|#...#|.#.#.|..#..|.#.#.|#...#|#...#",
    "Y": "#...#|#...#|.#.#.|..#..|..#..|..#..|..#..",
    "Z": "#####|....#|...#.|..#..|.#...|#....|#####",
    "0": ".###.|#...#|#..##|#.#.#|##..#|#...#|.###.",
    "1": "..#..|.##..|..#..|..#..|..#..|..#..|.###.",
    "2": ".###.|#...#|....#|...#.|..#..|.#...|#####",
    "3": ".###.|#...#|....#|..##.|....#|#...#|.###.",
    "4": "...#.|..##.|.#.#.|#..#.|#####|...#.|...#.",
    "5": "#####|#....|####.|....#|....#|#...#|.###.",
    "6": "..##.|.#...|#....|####.|#...#|#...#|.###.",
    "7": "#####|....#|...#.|..#..|.#...|.#...|.#...",
    "8": ".###.|#...#|#...#|.###.|#...#|#...#|.###.",
    "9": ".###.|#...#|#...#|.####|....#|...#.|.##..",
    " ": ".....|.....|.....|.....|.....|.....|.....",
    "-": ".....|.....|.....|#####|.....|.....|.....",
    ".": ".....|.....|.....|.....|.....|.##..|.##..",
    ",": ".....|.....|.....|.....|.##..|..#..|.#...",
    ":": ".....|.##..|.##..|.....|.##..|.##..|.....",
    "%": "##..#|##..#|...#.|..#..|.#...|#..##|#..##",
    "(": "...#.|..#..|.#...|.#...|.#...|..#..|...#.",
    ")": ".#...|..#..|...#.|...#.|...#.|..#..|.#...",
    "/": "....#|...#.|...#.|..#..|.#...|.#...|#....",
    "#": ".#.#.|#####|.#.#.|.#.#.|#####|.#.#.|.#.#.",
    "'": "..#..|..#..|.....|.....|.....|.....|.....",
}

_UNKNOWN = "#####|#...#|#...#|#...#|#...#|#...#|#####"


def _compile(spec: str) -> np.ndarray:
    rows = spec.split("|")
    arr = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
    arr.setflags(write=False)
    return arr


_GLYPHS = {ch: _compile(spec) for ch, spec in _RAW.items()}
_UNKNOWN_GLYPH = _compile(_UNKNOWN)


def glyph(ch: str) -> np.ndarray:
    return _GLYPHS.get(ch.upper(), _UNKNOWN_GLYPH)


def scale_for(font_size: float) -> int:
    """Integer glyph scale for a nominal size in px (7 px per scale step)."""
    return max(1, int(font_size / GLYPH_H + 0.5))


def text_size(text: str, font_size: float) -> tuple[int, int]:
    """Pixel (w, h) of rendered text; empty text is 0 wide."""
    k = scale_for(font_size)
    if not text:
        return (0, GLYPH_H * k)
    return ((ADVANCE * len(text) - 1) * k, GLYPH_H * k)


def render_text_mask(text: str, font_size: float) -> np.ndarray:
    """Boolean pixel mask of the text at the given size."""
    k = scale_for(font_size)
    w, h = text_size(text, font_size)
    out = np.zeros((h, max(w, 0)), dtype=bool)
    x = 0
    for ch in text:
        g = glyph(ch)
        if k > 1:
            g = np.kron(g, np.ones((k, k), dtype=bool))
        out[:, x:x + GLYPH_W * k] = g
        x += ADVANCE * k
    return out
