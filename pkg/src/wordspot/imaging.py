"""Raster image types, Netpbm file I/O, and the binary preprocessing chain.

Pages travel through this module in a fixed order before anything downstream
sees them: threshold (Otsu) -> 3x3 majority mean filter -> Zhang-Suen
thinning.  Everything here is a pure function on immutable values, so pages
can be preprocessed in parallel and results merged deterministically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

_WHITESPACE = frozenset(b" \t\n\r\x0b\x0c")


class NetpbmParseError(ValueError):
    """Malformed PGM/PBM data.  ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster, row-major, shape ``(height, width)``."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("GrayImage needs a non-empty 2-D pixel array")
        if px.dtype != np.uint8:
            if np.any((px < 0) | (px > 255)):
                raise ValueError("gray intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        else:
            px = px.copy()
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Ink mask, row-major, shape ``(height, width)``; True = black ink."""

    ink: np.ndarray

    def __post_init__(self) -> None:
        ink = np.asarray(self.ink)
        if ink.ndim != 2 or ink.shape[0] < 1 or ink.shape[1] < 1:
            raise ValueError("BinaryImage needs a non-empty 2-D ink array")
        ink = ink.astype(bool) if ink.dtype != bool else ink.copy()
        ink.setflags(write=False)
        object.__setattr__(self, "ink", ink)

    @property
    def width(self) -> int:
        return self.ink.shape[1]

    @property
    def height(self) -> int:
        return self.ink.shape[0]

    @property
    def ink_count(self) -> int:
        return int(self.ink.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.ink.shape == other.ink.shape and bool(
            np.array_equal(self.ink, other.ink)
        )


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned pixel box; (x, y) is the top-left corner."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"degenerate box {self.w}x{self.h}")
        if self.x < 0 or self.y < 0:
            raise ValueError("box origin must be non-negative")

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h


def crop(img: BinaryImage, box: BoundingBox) -> BinaryImage:
    """Extract the sub-image under ``box``; the box must lie inside ``img``."""
    if box.x2 > img.width or box.y2 > img.height:
        raise ValueError(f"box {box} exceeds image {img.width}x{img.height}")
    return BinaryImage(img.ink[box.y : box.y2, box.x : box.x2])


def ink_bbox(img: BinaryImage) -> BoundingBox | None:
    """Tight bounding box of the ink, or None for a blank image."""
    ys, xs = np.nonzero(img.ink)
    if len(xs) == 0:
        return None
    x0, x1 = int(xs.min()), int(xs.max())
    y0, y1 = int(ys.min()), int(ys.max())
    return BoundingBox(x0, y0, x1 - x0 + 1, y1 - y0 + 1)


def tight_crop(img: BinaryImage) -> BinaryImage:
    """Crop to the ink extent; raises on a blank image."""
    box = ink_bbox(img)
    if box is None:
        raise ValueError("cannot tight-crop a blank image")
    return crop(img, box)


# ---------------------------------------------------------------------------
# Preprocessing operations
# ---------------------------------------------------------------------------


def otsu_binarize(img: GrayImage) -> BinaryImage:
    """Threshold by maximizing between-class variance over all 256 candidates.

    A pixel is ink iff its intensity is strictly below the chosen threshold,
    so the darker class is the foreground.  Among tied thresholds the
    smallest wins; a constant image therefore maps to all-background.
    """
    hist = np.bincount(img.pixels.ravel(), minlength=256).astype(np.int64)
    total = int(hist.sum())
    levels = np.arange(256, dtype=np.int64)
    # w0[t] / s0[t]: pixel count and intensity sum of the class {i < t}.
    w0 = np.concatenate(([0], np.cumsum(hist)))[:256]
    s0 = np.concatenate(([0], np.cumsum(hist * levels)))[:256]
    w1 = total - w0
    s1 = int((hist * levels).sum()) - s0
    valid = (w0 > 0) & (w1 > 0)
    variance = np.zeros(256)
    mu0 = s0[valid] / w0[valid]
    mu1 = s1[valid] / w1[valid]
    variance[valid] = (w0[valid] / total) * (w1[valid] / total) * (mu0 - mu1) ** 2
    threshold = int(np.argmax(variance))  # first (= smallest) maximizer
    return BinaryImage(img.pixels < threshold)


def mean_filter(img: BinaryImage) -> BinaryImage:
    """3x3 majority filter: output ink iff the neighborhood mean exceeds 1/2.

    Border pixels use their clipped (smaller) neighborhood.  The comparison
    ``2 * ink_count > cells`` keeps everything in exact integer arithmetic.
    """
    ink = img.ink.astype(np.int64)
    h, w = ink.shape
    summed = np.zeros((h + 1, w + 1), dtype=np.int64)
    summed[1:, 1:] = ink.cumsum(axis=0).cumsum(axis=1)
    y0 = np.clip(np.arange(h) - 1, 0, h)
    y1 = np.clip(np.arange(h) + 2, 0, h)
    x0 = np.clip(np.arange(w) - 1, 0, w)
    x1 = np.clip(np.arange(w) + 2, 0, w)
    counts = (
        summed[np.ix_(y1, x1)]
        - summed[np.ix_(y0, x1)]
        - summed[np.ix_(y1, x0)]
        + summed[np.ix_(y0, x0)]
    )
    cells = np.outer(y1 - y0, x1 - x0)
    return BinaryImage(2 * counts > cells)


def _neighborhood(padded: np.ndarray) -> list[np.ndarray]:
    """The 8 neighbors P2..P9 (N, NE, E, SE, S, SW, W, NW) of every pixel."""
    return [
        padded[:-2, 1:-1],
        padded[:-2, 2:],
        padded[1:-1, 2:],
        padded[2:, 2:],
        padded[2:, 1:-1],
        padded[2:, :-2],
        padded[1:-1, :-2],
        padded[:-2, :-2],
    ]


def skeletonize(img: BinaryImage) -> BinaryImage:
    """Zhang-Suen two-subiteration thinning, run to convergence.

    Subiteration 1 deletes ink pixels with 2..6 ink neighbors, exactly one
    0->1 transition around the neighbor ring, and N*E*S = E*S*W = 0;
    subiteration 2 swaps the directional products to N*E*W = N*S*W = 0.
    Deletions within a subiteration are simultaneous.
    """
    ink = img.ink.copy()
    while True:
        changed = False
        for step in (0, 1):
            if not ink.any():
                break
            padded = np.pad(ink, 1, constant_values=False)
            nb = _neighborhood(padded)
            count = np.zeros(ink.shape, dtype=np.uint8)
            for n in nb:
                count += n
            ring = nb + [nb[0]]
            transitions = np.zeros(ink.shape, dtype=np.uint8)
            for a, b in zip(ring[:-1], ring[1:]):
                transitions += ~a & b
            north, east, south, west = nb[0], nb[2], nb[4], nb[6]
            if step == 0:
                cond_a = ~(north & east & south)
                cond_b = ~(east & south & west)
            else:
                cond_a = ~(north & east & west)
                cond_b = ~(north & south & west)
            deletable = (
                ink
                & (count >= 2)
                & (count <= 6)
                & (transitions == 1)
                & cond_a
                & cond_b
            )
            if deletable.any():
                ink &= ~deletable
                changed = True
        if not changed:
            break
    return BinaryImage(ink)


def horizontal_projection(img: BinaryImage) -> np.ndarray:
    """Ink pixels per row (length = height)."""
    return img.ink.sum(axis=1).astype(np.int64)


def vertical_projection(img: BinaryImage) -> np.ndarray:
    """Ink pixels per column (length = width)."""
    return img.ink.sum(axis=0).astype(np.int64)


def geometric_moment(img: BinaryImage, p: int, q: int) -> float:
    """Normalized moment sum((x/width)^p * (y/height)^q) over ink pixels.

    Only ranks p, q in {0, 1} are supported; the (0, 0) moment is the ink
    count.
    """
    if p not in (0, 1) or q not in (0, 1):
        raise ValueError(f"moment rank ({p}, {q}) unsupported; p, q must be 0 or 1")
    ys, xs = np.nonzero(img.ink)
    if p == 0 and q == 0:
        return float(len(xs))
    term = np.ones(len(xs), dtype=np.float64)
    if p == 1:
        term = term * (xs / img.width)
    if q == 1:
        term = term * (ys / img.height)
    return float(term.sum())


def preprocess_page(img: GrayImage | BinaryImage) -> BinaryImage:
    """Standard page chain: Otsu (gray input only), mean filter, thinning."""
    page = otsu_binarize(img) if isinstance(img, GrayImage) else img
    return skeletonize(mean_filter(page))


def preprocess_word(img: BinaryImage, margin: int = 2) -> BinaryImage:
    """Word-image chain: pad, mean filter, thin, then crop to the ink extent.

    The blank margin makes the filter see the same clipped neighborhoods a
    word surrounded by page whitespace would, so an isolated rendering and a
    segmented page crop preprocess identically.  Raises if nothing survives.
    """
    padded = np.zeros(
        (img.height + 2 * margin, img.width + 2 * margin), dtype=bool
    )
    padded[margin : margin + img.height, margin : margin + img.width] = img.ink
    processed = skeletonize(mean_filter(BinaryImage(padded)))
    if not processed.ink.any():
        raise ValueError("word image is empty after preprocessing")
    return tight_crop(processed)


# ---------------------------------------------------------------------------
# Netpbm I/O (PGM P2/P5 in, PBM P1/P4 in/out)
# ---------------------------------------------------------------------------


def _skip_filler(data: bytes, pos: int) -> int:
    while pos < len(data):
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            while pos < len(data) and data[pos] not in (10, 13):
                pos += 1
        else:
            break
    return pos


def _token(data: bytes, pos: int, what: str) -> tuple[bytes, int]:
    pos = _skip_filler(data, pos)
    if pos >= len(data):
        raise NetpbmParseError(f"unexpected end of file while reading {what}", pos)
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
        pos += 1
    return data[start:pos], pos


def _int_token(data: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, end = _token(data, pos, what)
    if not tok.isdigit():
        raise NetpbmParseError(f"expected integer {what}, got {tok!r}", pos)
    return int(tok), end


def _raster_start(data: bytes, pos: int) -> int:
    # Raw formats: exactly one whitespace byte separates header and payload.
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise NetpbmParseError("missing whitespace before raster data", pos)
    return pos + 1


def _read_plain_bits(data: bytes, pos: int, count: int) -> np.ndarray:
    bits = np.empty(count, dtype=bool)
    filled = 0
    while filled < count:
        pos = _skip_filler(data, pos)
        if pos >= len(data):
            raise NetpbmParseError(
                f"truncated raster: {filled} of {count} pixels", pos
            )
        c = data[pos]
        if c == ord("0"):
            bits[filled] = False
        elif c == ord("1"):
            bits[filled] = True
        else:
            raise NetpbmParseError(f"invalid plain-bitmap byte {chr(c)!r}", pos)
        filled += 1
        pos += 1
    return bits


def read_image(path: str | os.PathLike) -> GrayImage | BinaryImage:
    """Read a PGM (P2/P5) as GrayImage or a PBM (P1/P4) as BinaryImage."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _token(data, 0, "magic number")
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        raise NetpbmParseError(f"unsupported magic {magic!r}", 0)
    width, pos = _int_token(data, pos, "width")
    height, pos = _int_token(data, pos, "height")
    if width < 1 or height < 1:
        raise NetpbmParseError(f"bad dimensions {width}x{height}", pos)
    count = width * height

    if magic in (b"P2", b"P5"):
        maxval, pos = _int_token(data, pos, "maxval")
        if not 1 <= maxval <= 255:
            raise NetpbmParseError(f"unsupported maxval {maxval} (need 1..255)", pos)
        if magic == b"P2":
            values = np.empty(count, dtype=np.uint8)
            for i in range(count):
                v, pos = _int_token(data, pos, f"pixel {i}")
                if v > maxval:
                    raise NetpbmParseError(f"pixel value {v} exceeds maxval", pos)
                values[i] = v
            return GrayImage(values.reshape(height, width))
        pos = _raster_start(data, pos)
        payload = data[pos : pos + count]
        if len(payload) < count:
            raise NetpbmParseError(
                f"truncated raster: {len(payload)} of {count} bytes", len(data)
            )
        values = np.frombuffer(payload, dtype=np.uint8)
        if maxval < 255 and int(values.max(initial=0)) > maxval:
            raise NetpbmParseError("pixel value exceeds maxval", pos)
        return GrayImage(values.reshape(height, width).copy())

    if magic == b"P1":
        bits = _read_plain_bits(data, pos, count)
        return BinaryImage(bits.reshape(height, width))
    pos = _raster_start(data, pos)
    row_bytes = (width + 7) // 8
    need = row_bytes * height
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise NetpbmParseError(
            f"truncated raster: {len(payload)} of {need} bytes", len(data)
        )
    rows = np.frombuffer(payload, dtype=np.uint8).reshape(height, row_bytes)
    bits = np.unpackbits(rows, axis=1)[:, :width]
    return BinaryImage(bits.astype(bool))


def write_image(img: GrayImage | BinaryImage, path: str | os.PathLike) -> None:
    """Write BinaryImage as raw PBM (P4) or GrayImage as raw PGM (P5)."""
    if isinstance(img, BinaryImage):
        header = f"P4\n{img.width} {img.height}\n".encode()
        packed = np.packbits(img.ink.astype(np.uint8), axis=1)
        payload = packed.tobytes()
    elif isinstance(img, GrayImage):
        header = f"P5\n{img.width} {img.height}\n255\n".encode()
        payload = img.pixels.tobytes()
    else:
        raise TypeError(f"cannot write {type(img).__name__}")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
