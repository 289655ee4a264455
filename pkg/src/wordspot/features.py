"""The 93-value word-shape descriptor.

Layout of ``FeatureVector.values``:

    [0]      width / height ratio of the word box
    [1]      ink density, percent of box area
    [2]      center of gravity: Euclidean norm of the normalized ink
             centroid measured from the top-left corner
    [3:23]   20 DCT coefficients of the vertical projection profile
    [23:48]  25 DCT coefficients of the top shape profile
    [48:73]  25 DCT coefficients of the bottom shape profile
    [73:83]  upper grid occupancy bits (0.0 / 1.0)
    [83:93]  lower grid occupancy bits (0.0 / 1.0)

All profiles are normalized by the word height, smoothed with a centered
5-point moving average, and resampled to 256 samples before the orthonormal
DCT-II, so spectra are comparable across word widths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from wordspot.imaging import BinaryImage, geometric_moment, vertical_projection

FEATURE_DIM = 93

RATIO_INDEX = 0
DENSITY_INDEX = 1
COG_INDEX = 2
VERTICAL_DCT = slice(3, 23)
TOP_DCT = slice(23, 48)
BOTTOM_DCT = slice(48, 73)
UPPER_GRID = slice(73, 83)
LOWER_GRID = slice(83, 93)

RESAMPLED_LENGTH = 256
SMOOTH_WINDOW = 5
GRID_CELLS = 10
GRID_DENSITY_THRESHOLD = 0.05


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Fixed-layout descriptor of one word image (see module docstring)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (FEATURE_DIM,):
            raise ValueError(f"feature vector must have {FEATURE_DIM} values")
        if not np.all(np.isfinite(vals)):
            raise ValueError("feature values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))


@dataclass(frozen=True, eq=False)
class ProfileSignal:
    """A non-negative per-column profile plus its native sample count."""

    samples: np.ndarray
    native_length: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("profile needs at least one sample")
        if np.any(samples < 0):
            raise ValueError("profile samples must be non-negative")
        if self.native_length != samples.size:
            raise ValueError("native_length must match the sample count")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProfileSignal):
            return NotImplemented
        return self.native_length == other.native_length and bool(
            np.array_equal(self.samples, other.samples)
        )


def density(word: BinaryImage) -> float:
    """Ink percentage of the word box: 100 * ink / (width * height)."""
    return 100.0 * word.ink_count / (word.width * word.height)


def center_of_gravity(word: BinaryImage) -> float:
    """Distance of the normalized ink centroid from the top-left corner."""
    m00 = geometric_moment(word, 0, 0)
    if m00 == 0:
        raise ValueError("center of gravity is undefined for a blank image")
    cx = geometric_moment(word, 1, 0) / m00
    cy = geometric_moment(word, 0, 1) / m00
    return float(np.sqrt(cx * cx + cy * cy))


def vertical_profile(word: BinaryImage) -> ProfileSignal:
    """Ink count per column."""
    return ProfileSignal(vertical_projection(word).astype(np.float64), word.width)


def top_profile(word: BinaryImage) -> ProfileSignal:
    """Per column: pixels at or below the first ink pixel (0 if none).

    Equivalent to flooding every column black from its topmost ink pixel
    downward and counting, which traces the word's upper silhouette.
    """
    ink = word.ink
    has_ink = ink.any(axis=0)
    first = ink.argmax(axis=0)
    samples = np.where(has_ink, word.height - first, 0).astype(np.float64)
    return ProfileSignal(samples, word.width)


def bottom_profile(word: BinaryImage) -> ProfileSignal:
    """Per column: pixels at or above the last ink pixel (0 if none)."""
    ink = word.ink
    has_ink = ink.any(axis=0)
    last = word.height - 1 - ink[::-1, :].argmax(axis=0)
    samples = np.where(has_ink, last + 1, 0).astype(np.float64)
    return ProfileSignal(samples, word.width)


def dct_ortho(signal: np.ndarray) -> np.ndarray:
    """Orthonormal DCT-II of a 1-D signal."""
    return dct(np.asarray(signal, dtype=np.float64), type=2, norm="ortho")


def _smooth(x: np.ndarray) -> np.ndarray:
    half = SMOOTH_WINDOW // 2
    padded = np.concatenate((np.repeat(x[:1], half), x, np.repeat(x[-1:], half)))
    kernel = np.full(SMOOTH_WINDOW, 1.0 / SMOOTH_WINDOW)
    return np.convolve(padded, kernel, mode="valid")


def _resample(x: np.ndarray, length: int) -> np.ndarray:
    if x.size == 1:
        return np.full(length, x[0])
    positions = np.linspace(0.0, x.size - 1, length)
    return np.interp(positions, np.arange(x.size, dtype=np.float64), x)


def profile_dct_features(
    profile: ProfileSignal, word_height: int, n_coeffs: int
) -> np.ndarray:
    """Leading DCT coefficients of a height-normalized, smoothed profile.

    Pipeline: divide by ``word_height``, centered 5-point moving average with
    clamped edges, linear resample to 256 samples, orthonormal DCT-II, keep
    coefficients 0..n_coeffs-1.  Linear in the input profile.
    """
    if n_coeffs not in (20, 25):
        raise ValueError("n_coeffs must be 20 or 25")
    if word_height < 1:
        raise ValueError("word_height must be positive")
    normalized = profile.samples / word_height
    resampled = _resample(_smooth(normalized), RESAMPLED_LENGTH)
    return dct_ortho(resampled)[:n_coeffs].copy()


def grid_features(word: BinaryImage, part: str) -> np.ndarray:
    """10 occupancy bits over one half of the word.

    The upper part is rows [0, h//2), the lower part rows [h//2, h); cell i
    covers columns [i*w//10, (i+1)*w//10).  A bit is 1.0 when the cell's ink
    density reaches 0.05; cells with no columns stay 0.0.
    """
    if part not in ("upper", "lower"):
        raise ValueError(f"part must be 'upper' or 'lower', not {part!r}")
    if word.height < 2:
        raise ValueError("grid features need height >= 2 to split the word")
    half = word.height // 2
    region = word.ink[:half, :] if part == "upper" else word.ink[half:, :]
    bits = np.zeros(GRID_CELLS)
    for i in range(GRID_CELLS):
        c0 = i * word.width // GRID_CELLS
        c1 = (i + 1) * word.width // GRID_CELLS
        if c1 <= c0:
            continue
        cell = region[:, c0:c1]
        if cell.sum() / cell.size >= GRID_DENSITY_THRESHOLD:
            bits[i] = 1.0
    return bits


def extract_features(word: BinaryImage) -> FeatureVector:
    """Assemble the full 93-value descriptor of a preprocessed word crop.

    The word is expected to be a tight, thinned crop with at least one ink
    pixel and height of at least 2.
    """
    if not word.ink.any():
        raise ValueError("cannot extract features from a blank word image")
    values = np.empty(FEATURE_DIM)
    values[RATIO_INDEX] = word.width / word.height
    values[DENSITY_INDEX] = density(word)
    values[COG_INDEX] = center_of_gravity(word)
    values[VERTICAL_DCT] = profile_dct_features(vertical_profile(word), word.height, 20)
    values[TOP_DCT] = profile_dct_features(top_profile(word), word.height, 25)
    values[BOTTOM_DCT] = profile_dct_features(bottom_profile(word), word.height, 25)
    values[UPPER_GRID] = grid_features(word, "upper")
    values[LOWER_GRID] = grid_features(word, "lower")
    return FeatureVector(values)
