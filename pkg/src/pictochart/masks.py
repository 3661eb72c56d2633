"""Run-length-encoded binary masks.

The canonical mask encoding is row-major over the mask's own bbox,
alternating run lengths starting with a run of zeros:
``(z0, o0, z1, o1, ...)``.  Runs may be zero only in the leading position.
The encoding is a plain tuple of ints so masks compare, hash and
deep-copy as values.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def rle_encode(mask: np.ndarray) -> tuple[int, ...]:
    """Encode a 2D boolean array into alternating zero/one run lengths."""
    flat = np.asarray(mask, dtype=bool).ravel()
    if flat.size == 0:
        return ()
    changes = np.flatnonzero(np.diff(flat.astype(np.int8)))
    bounds = np.concatenate(([0], changes + 1, [flat.size]))
    runs = np.diff(bounds)
    if flat[0]:
        # encoding starts with zeros by convention
        runs = np.concatenate(([0], runs))
    return tuple(int(r) for r in runs)


@lru_cache(maxsize=4096)
def _decode_cached(rle: tuple[int, ...], h: int, w: int) -> np.ndarray:
    total = h * w
    flat = np.zeros(total, dtype=bool)
    pos = 0
    value = False
    for run in rle:
        if value:
            flat[pos:pos + run] = True
        pos += run
        value = not value
    if pos != total:
        raise ValueError(f"RLE covers {pos} pixels, mask is {h}x{w}={total}")
    out = flat.reshape(h, w)
    out.setflags(write=False)
    return out


def rle_decode(rle: tuple[int, ...], h: int, w: int) -> np.ndarray:
    """Decode run lengths into a read-only (h, w) boolean array."""
    return _decode_cached(tuple(rle), h, w)


def rle_count(rle: tuple[int, ...]) -> int:
    """Number of set pixels."""
    return sum(rle[1::2])


def mask_tight_bbox(mask: np.ndarray) -> tuple[int, int, int, int] | None:
    """(x, y, w, h) of the set pixels, or None if the mask is empty."""
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        return None
    x0, x1 = int(xs.min()), int(xs.max())
    y0, y1 = int(ys.min()), int(ys.max())
    return (x0, y0, x1 - x0 + 1, y1 - y0 + 1)
