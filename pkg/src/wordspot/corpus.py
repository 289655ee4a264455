"""Deterministic synthetic-corpus rasterizer and query rendering.

Pages are flowed left to right, top to bottom from an embedded bitmap font;
a fixed seed fixes every byte of the output.  The ground-truth box emitted
for each word is the tight ink extent the word has *after* the standard
preprocessing chain (mean filter + thinning), computed locally from the
word's own raster; because the chain is local and words are separated by
wide blank gutters, this equals the extent the word shows on the
preprocessed page, which is the coordinate space the index works in.  A
word whose strokes do not survive preprocessing (possible at scale 1) falls
back to its raw ink extent.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from wordspot import fonts
from wordspot.imaging import (
    BinaryImage,
    BoundingBox,
    ink_bbox,
    mean_filter,
    skeletonize,
    write_image,
)
from wordspot.store import TruthRow, write_truth

STANDARD_SEED = 42
STANDARD_LEXICON: tuple[str, ...] = (
    "the", "and", "for", "are", "but", "not", "you", "all", "any", "can",
    "her", "was", "one", "our", "out", "day", "get", "has", "him", "his",
    "how", "man", "new", "now", "old", "see", "two", "way", "who", "boy",
    "word", "work", "time", "tree", "book", "look", "house", "mouse",
    "horse", "water", "paper", "after", "other", "think", "thing", "place",
    "plane", "sound", "round", "ground",
)
# Near-twins of standard words and of each other (one letter apart, similar
# silhouettes).  Appending them to the lexicon stresses precision and, just
# as important, pushes the number of distinct word shapes past the number of
# active features; with fewer distinct shapes every feature column is an
# exact linear blend of the others and the learned weights collapse to
# uniform.
CONFUSABLE_WORDS: tuple[str, ...] = (
    "cook", "boot", "loot", "lock", "cool", "coal", "fool", "foal", "foot",
    "moon", "mood", "moot", "lane", "cane", "bane", "mane", "sane", "vane",
    "wane", "pane", "line", "lime", "pine", "dine", "mine", "nine", "vine",
    "wine", "core", "bore", "wore", "fore", "more", "sore", "tore", "pore",
    "came", "come", "dome", "home", "hole", "mole", "pole", "role", "wand",
    "sand", "band", "hand", "land", "lend", "bend", "mend", "bond", "fond",
    "loon", "boon", "bead", "dead", "deed", "mean",
)


@dataclass(frozen=True)
class CorpusSpec:
    """Everything that determines a rendered corpus, byte for byte."""

    seed: int = STANDARD_SEED
    pages: int = 100
    words_per_page: int = 12
    lexicon: tuple[str, ...] = STANDARD_LEXICON
    font: str = "A"
    scale: int = 2
    word_gap: int | None = None    # blank px between words; default 8 * scale
    line_gap: int | None = None    # blank px between lines; default 8 * scale
    margin: int | None = None      # page border; default 16 * scale
    page_width: int | None = None  # default 400 * scale
    page_height: int | None = None # default 300 * scale

    def __post_init__(self) -> None:
        if not self.lexicon:
            raise ValueError("lexicon must not be empty")
        if self.pages < 1 or self.words_per_page < 1:
            raise ValueError("pages and words_per_page must be positive")
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        if self.font not in fonts.FONT_NAMES:
            raise ValueError(f"unknown font {self.font!r}")
        object.__setattr__(self, "lexicon", tuple(self.lexicon))

    @property
    def eff_word_gap(self) -> int:
        return self.word_gap if self.word_gap is not None else 8 * self.scale

    @property
    def eff_line_gap(self) -> int:
        return self.line_gap if self.line_gap is not None else 8 * self.scale

    @property
    def eff_margin(self) -> int:
        return self.margin if self.margin is not None else 16 * self.scale

    @property
    def eff_page_width(self) -> int:
        return self.page_width if self.page_width is not None else 400 * self.scale

    @property
    def eff_page_height(self) -> int:
        return self.page_height if self.page_height is not None else 300 * self.scale


def standard_spec(**overrides) -> CorpusSpec:
    """The desk-scale reference corpus: seed 42, 100 pages, 12 words/page."""
    return replace(CorpusSpec(), **overrides) if overrides else CorpusSpec()


def augmented_spec(**overrides) -> CorpusSpec:
    """Standard corpus with near-confusable word pairs added to the lexicon."""
    spec = CorpusSpec(lexicon=STANDARD_LEXICON + CONFUSABLE_WORDS)
    return replace(spec, **overrides) if overrides else spec


_SPEC_INT_KEYS = {
    "seed", "pages", "words_per_page", "scale", "word_gap", "line_gap",
    "margin", "page_width", "page_height",
}


def load_spec(path: str | os.PathLike) -> CorpusSpec:
    """Parse a flat key=value spec file (# comments and blank lines allowed).

    ``lexicon`` is a comma-separated word list; ``font`` is A or B; all other
    keys are integers.
    """
    kwargs: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"spec line {line_no}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key == "lexicon":
                words = tuple(w.strip() for w in value.split(",") if w.strip())
                kwargs["lexicon"] = words
            elif key == "font":
                kwargs["font"] = value
            elif key in _SPEC_INT_KEYS:
                try:
                    kwargs[key] = int(value)
                except ValueError:
                    raise ValueError(
                        f"spec line {line_no}: {key} needs an integer, got {value!r}"
                    ) from None
            else:
                raise ValueError(f"spec line {line_no}: unknown key {key!r}")
    return CorpusSpec(**kwargs)


def write_spec(spec: CorpusSpec, path: str | os.PathLike) -> None:
    lines = [
        f"seed={spec.seed}",
        f"pages={spec.pages}",
        f"words_per_page={spec.words_per_page}",
        f"font={spec.font}",
        f"scale={spec.scale}",
        f"lexicon={','.join(spec.lexicon)}",
    ]
    for key in ("word_gap", "line_gap", "margin", "page_width", "page_height"):
        value = getattr(spec, key)
        if value is not None:
            lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _word_cells(word: str, font: str, scale: int) -> np.ndarray:
    """The word stamped on its glyph-cell grid (height 16*scale)."""
    if not word:
        raise ValueError("cannot render an empty word")
    available = fonts.supported_characters(font)
    for ch in word:
        if ch not in available:
            raise ValueError(f"font {font} cannot render character {ch!r}")
    cells = np.concatenate([fonts.glyph_bitmap(ch, font) for ch in word], axis=1)
    if scale > 1:
        cells = np.kron(cells, np.ones((scale, scale), dtype=bool))
    return cells


def render_query(word: str, font: str, scale: int) -> BinaryImage:
    """Render one word with the corpus glyph pipeline, tight-cropped.

    The result is the raw rendering; run it through
    ``imaging.preprocess_word`` before feature extraction so it matches what
    indexing produced from a page.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    cells = _word_cells(word, font, scale)
    img = BinaryImage(cells)
    box = ink_bbox(img)
    if box is None:
        raise ValueError(f"word {word!r} rendered no ink")
    return BinaryImage(cells[box.y : box.y2, box.x : box.x2])


def _processed_extent(cells: np.ndarray, margin: int = 2) -> BoundingBox | None:
    """Tight box of the preprocessed word raster, in cell coordinates."""
    padded = np.zeros(
        (cells.shape[0] + 2 * margin, cells.shape[1] + 2 * margin), dtype=bool
    )
    padded[margin:-margin, margin:-margin] = cells
    processed = skeletonize(mean_filter(BinaryImage(padded)))
    box = ink_bbox(processed)
    if box is None:
        return None
    return BoundingBox(box.x - margin, box.y - margin, box.w, box.h)


@dataclass
class _PageLayout:
    spec: CorpusSpec
    ink: np.ndarray = field(init=False)
    cursor_x: int = field(init=False)
    cursor_y: int = field(init=False)

    def __post_init__(self) -> None:
        self.ink = np.zeros(
            (self.spec.eff_page_height, self.spec.eff_page_width), dtype=bool
        )
        self.cursor_x = self.spec.eff_margin
        self.cursor_y = self.spec.eff_margin

    def place(self, word: str, cells: np.ndarray) -> tuple[int, int]:
        spec = self.spec
        h, w = cells.shape
        limit = spec.eff_page_width - spec.eff_margin
        if spec.eff_margin + w > limit:
            raise ValueError(
                f"word {word!r} is too wide for the page "
                f"({w}px vs {limit - spec.eff_margin}px of line)"
            )
        if self.cursor_x + w > limit:
            self.cursor_x = spec.eff_margin
            self.cursor_y += h + spec.eff_line_gap
        if self.cursor_y + h > spec.eff_page_height - spec.eff_margin:
            raise ValueError(
                f"page overflow placing {word!r}; enlarge the page or reduce "
                "words_per_page"
            )
        x, y = self.cursor_x, self.cursor_y
        self.ink[y : y + h, x : x + w] |= cells
        self.cursor_x = x + w + spec.eff_word_gap
        return x, y


def render_corpus(
    spec: CorpusSpec, out_dir: str | os.PathLike
) -> tuple[list[Path], Path]:
    """Render every page PBM plus the ground-truth TSV into ``out_dir``.

    Returns (page paths in order, truth path).  Identical specs produce
    byte-identical outputs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)
    lexicon = np.array(spec.lexicon, dtype=object)
    pad = max(3, len(str(spec.pages - 1)))
    cell_cache: dict[str, np.ndarray] = {}
    extent_cache: dict[str, BoundingBox] = {}
    page_paths: list[Path] = []
    truth_rows: list[TruthRow] = []

    for page_index in range(spec.pages):
        doc_id = f"page{page_index:0{pad}d}"
        words = [str(w) for w in rng.choice(lexicon, size=spec.words_per_page)]
        layout = _PageLayout(spec)
        for word_id, word in enumerate(words):
            cells = cell_cache.get(word)
            if cells is None:
                cells = _word_cells(word, spec.font, spec.scale)
                cell_cache[word] = cells
            x, y = layout.place(word, cells)
            extent = extent_cache.get(word)
            if extent is None:
                extent = _processed_extent(cells)
                if extent is None:
                    # strokes too thin to survive filtering; record raw extent
                    raw = ink_bbox(BinaryImage(cells))
                    assert raw is not None
                    extent = raw
                extent_cache[word] = extent
            truth_rows.append(
                TruthRow(
                    doc_id,
                    word_id,
                    BoundingBox(x + extent.x, y + extent.y, extent.w, extent.h),
                    word,
                )
            )
        path = out / f"{doc_id}.pbm"
        write_image(BinaryImage(layout.ink), path)
        page_paths.append(path)

    truth_path = out / "truth.tsv"
    write_truth(truth_rows, truth_path)
    return page_paths, truth_path


def select_query_words(lexicon, count: int, seed: int) -> list[str]:
    """Deterministic query draw: ``count`` distinct words from the lexicon."""
    words = list(lexicon)
    if count > len(words):
        raise ValueError(f"cannot draw {count} distinct words from {len(words)}")
    rng = np.random.default_rng(seed)
    picked = rng.choice(np.array(words, dtype=object), size=count, replace=False)
    return [str(w) for w in picked]
