"""Recursive X-Y cut decomposition of a page into word boxes.

The recursion alternates row and column splitting: any fully blank row
separates line bands, and within a band a blank-column run at least
``max(2, round(word_gap_factor * band_height))`` wide separates words.
Leaves come out in reading order (bands top to bottom, cells left to right)
because that is the order the recursion visits them in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wordspot.imaging import BinaryImage, BoundingBox


@dataclass(frozen=True)
class SegmentationConfig:
    min_region_w: int = 3
    min_region_h: int = 3
    min_ink: int = 5
    word_gap_factor: float = 0.35
    max_depth: int = 6

    def __post_init__(self) -> None:
        if min(self.min_region_w, self.min_region_h, self.min_ink) <= 0:
            raise ValueError("size and ink minimums must be positive")
        if not 0.0 < self.word_gap_factor < 1.0:
            raise ValueError("word_gap_factor must lie in (0, 1)")
        if self.max_depth <= 0:
            raise ValueError("max_depth must be positive")


DEFAULT_CONFIG = SegmentationConfig()


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Half-open [start, end) runs of True in a 1-D bool array."""
    if not mask.any():
        return []
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(edges[i]), int(edges[i + 1])) for i in range(0, len(edges), 2)]


def _word_gap_threshold(band_height: int, factor: float) -> int:
    # round-half-up, so factor 0.35 on a height-10 band gives 4
    return max(2, int(math.floor(factor * band_height + 0.5)))


def segment_leaves(page: BinaryImage, cfg: SegmentationConfig = DEFAULT_CONFIG) -> list[BoundingBox]:
    """All leaf boxes of the X-Y cut recursion, unfiltered, in reading order.

    Leaves are tight (trimmed to their ink extent), pairwise disjoint, and
    together cover every ink pixel of the page.
    """
    ink = page.ink
    leaves: list[BoundingBox] = []

    def recurse(x: int, y: int, w: int, h: int, depth: int) -> None:
        sub = ink[y : y + h, x : x + w]
        row_any = sub.any(axis=1)
        if not row_any.any():
            return
        rows = np.flatnonzero(row_any)
        col_any = sub.any(axis=0)
        cols = np.flatnonzero(col_any)
        # trim to the ink extent
        y0, y1 = y + int(rows[0]), y + int(rows[-1]) + 1
        x0, x1 = x + int(cols[0]), x + int(cols[-1]) + 1
        if depth >= cfg.max_depth:
            leaves.append(BoundingBox(x0, y0, x1 - x0, y1 - y0))
            return
        trimmed = ink[y0:y1, x0:x1]
        bands = _runs(trimmed.any(axis=1))
        pieces: list[tuple[int, int, int, int]] = []
        for r0, r1 in bands:
            band = trimmed[r0:r1, :]
            gap = _word_gap_threshold(r1 - r0, cfg.word_gap_factor)
            blank = _runs(~band.any(axis=0))
            separators = [(a, b) for a, b in blank if b - a >= gap]
            start = 0
            for a, b in separators:
                if a > start:
                    pieces.append((start, a, r0, r1))
                start = b
            if start < band.shape[1]:
                pieces.append((start, band.shape[1], r0, r1))
        if len(pieces) == 1:
            leaves.append(BoundingBox(x0, y0, x1 - x0, y1 - y0))
            return
        for c0, c1, r0, r1 in pieces:
            recurse(x0 + c0, y0 + r0, c1 - c0, r1 - r0, depth + 1)

    recurse(0, 0, page.width, page.height, 0)
    return leaves


def segment_words(page: BinaryImage, cfg: SegmentationConfig = DEFAULT_CONFIG) -> list[BoundingBox]:
    """Word boxes of a preprocessed page: the X-Y cut leaves minus noise.

    Leaves narrower than ``min_region_w``, shorter than ``min_region_h``, or
    holding fewer than ``min_ink`` ink pixels are discarded.  A blank page
    yields an empty list.
    """
    kept = []
    for box in segment_leaves(page, cfg):
        if box.w < cfg.min_region_w or box.h < cfg.min_region_h:
            continue
        if int(page.ink[box.y : box.y2, box.x : box.x2].sum()) < cfg.min_ink:
            continue
        kept.append(box)
    return kept
