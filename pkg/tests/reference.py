"""Independent reference implementations used as test oracles.

Everything here is written from first principles (plain loops, textbook
formulas) and must stay independent of the production code paths it checks.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage


def otsu_threshold_reference(pixels: np.ndarray) -> int:
    """Exhaustive search over all 256 thresholds, straight from the pixels.

    For each candidate t the foreground class is {intensity < t}; the score
    is the between-class variance w0 * w1 * (mu0 - mu1)^2 with w as class
    probability.  Smallest maximizer wins.
    """
    flat = pixels.ravel()
    total = flat.size
    best_t, best_score = 0, -1.0
    for t in range(256):
        fg = flat[flat < t]
        bg = flat[flat >= t]
        if len(fg) == 0 or len(bg) == 0:
            score = 0.0
        else:
            w0 = len(fg) / total
            w1 = len(bg) / total
            score = w0 * w1 * (fg.mean() - bg.mean()) ** 2
        if score > best_score:
            best_t, best_score = t, score
    return best_t


def mean_filter_reference(ink: np.ndarray) -> np.ndarray:
    """Pixel-by-pixel 3x3 majority recomputation with clipped borders."""
    h, w = ink.shape
    out = np.zeros_like(ink, dtype=bool)
    for y in range(h):
        for x in range(w):
            count = cells = 0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w:
                        cells += 1
                        count += int(ink[yy, xx])
            out[y, x] = count / cells > 0.5
    return out


def _zs_neighbors(ink: np.ndarray, y: int, x: int) -> list[int]:
    """P2..P9 clockwise from north; outside pixels count as background."""
    h, w = ink.shape
    offsets = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)]
    values = []
    for dy, dx in offsets:
        yy, xx = y + dy, x + dx
        values.append(int(ink[yy, xx]) if 0 <= yy < h and 0 <= xx < w else 0)
    return values

def zhang_suen_reference(ink: np.ndarray) -> np.ndarray:
    """Two-subiteration thinning transcribed from the published rules."""
    img = ink.astype(bool).copy()
    while True:
        removed_any = False
        for phase in (1, 2):
            marked = []
            ys, xs = np.nonzero(img)
            for y, x in zip(ys, xs):
                p = _zs_neighbors(img, y, x)
                b = sum(p)
                if not 2 <= b <= 6:
                    continue
                ring = p + [p[0]]
                a = sum(
                    1 for i in range(8) if ring[i] == 0 and ring[i + 1] == 1
                )
                if a != 1:
                    continue
                p2, p4, p6, p8 = p[0], p[2], p[4], p[6]
                if phase == 1:
                    if p2 * p4 * p6 != 0 or p4 * p6 * p8 != 0:
                        continue
                else:
                    if p2 * p4 * p8 != 0 or p2 * p6 * p8 != 0:
                        continue
                marked.append((y, x))
            for y, x in marked:
                img[y, x] = False
            removed_any = removed_any or bool(marked)
        if not removed_any:
            return img


def count_components(ink: np.ndarray) -> int:
    """8-connected foreground component count."""
    return int(ndimage.label(ink, structure=np.ones((3, 3), dtype=int))[1])


def dct_ii_ortho_reference(signal: np.ndarray) -> np.ndarray:
    """Naive O(N^2) orthonormal DCT-II from the cosine-sum definition."""
    x = np.asarray(signal, dtype=np.float64)
    n = x.size
    out = np.empty(n)
    for k in range(n):
        acc = 0.0
        for i in range(n):
            acc += x[i] * math.cos(math.pi * (2 * i + 1) * k / (2 * n))
        scale = math.sqrt(1.0 / n) if k == 0 else math.sqrt(2.0 / n)
        out[k] = scale * acc
    return out


def moment_reference(ink: np.ndarray, p: int, q: int) -> float:
    """Double-loop normalized geometric moment."""
    h, w = ink.shape
    acc = 0.0
    for y in range(h):
        for x in range(w):
            if ink[y, x]:
                acc += (x / w) ** p * (y / h) ** q
    return acc


def top_profile_reference(ink: np.ndarray) -> np.ndarray:
    """Build the flooded image explicitly, then column-sum it."""
    h, w = ink.shape
    filled = np.zeros_like(ink, dtype=bool)
    for x in range(w):
        seen = False
        for y in range(h):
            seen = seen or bool(ink[y, x])
            filled[y, x] = seen
    return filled.sum(axis=0).astype(np.float64)


def bottom_profile_reference(ink: np.ndarray) -> np.ndarray:
    h, w = ink.shape
    filled = np.zeros_like(ink, dtype=bool)
    for x in range(w):
        seen = False
        for y in range(h - 1, -1, -1):
            seen = seen or bool(ink[y, x])
            filled[y, x] = seen
    return filled.sum(axis=0).astype(np.float64)


def pearson_reference(a: np.ndarray, b: np.ndarray) -> float:
    """Textbook covariance over sigma product."""
    am, bm = a - a.mean(), b - b.mean()
    return float((am * bm).sum() / math.sqrt((am**2).sum() * (bm**2).sum()))


def multiple_correlation_regression(data: np.ndarray, target: int) -> float:
    """sqrt(R^2) of the least-squares regression of one column on the rest."""
    y = data[:, target]
    others = np.delete(data, target, axis=1)
    design = np.column_stack([np.ones(len(y)), others])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coef
    ss_res = float((residual**2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    return math.sqrt(max(0.0, min(1.0, 1.0 - ss_res / ss_tot)))
