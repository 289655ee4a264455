"""Two embedded 8x16 bitmap fonts for the synthetic corpus rasterizer.

Both fonts cover lowercase a-z on a fixed cell.  Letter bodies ink columns
0-6; rows 0-1 are leading, ascenders start at row 2, the x-height body spans
rows 6-12 (baseline 12), and descenders reach row 15.  On top of its body,
every glyph carries a full-width connector band on rows 10-11 (a cursive
join), so consecutive letters of a word fuse into one connected component.
Thinning can widen the apparent gaps between letter bodies by several
pixels, and without the join those gaps would rival the segmenter's
word-cut threshold; with it, a blank column can only ever occur between
words.

Font B is a deliberately different cut of the same letterforms (squared
shoulder joins, extra serifs, filled notches); every glyph differs from its
font A counterpart by at least one pixel.
"""

from __future__ import annotations

import numpy as np

GLYPH_WIDTH = 8
GLYPH_HEIGHT = 16
CONNECTOR_ROWS = (10, 11)

_BLANK = "........"
_FULL = "########"


def _merge(row: str, full: str) -> str:
    return "".join("#" if (a == "#" or b == "#") else "." for a, b in zip(row, full))


def _glyph(rows: dict[int, str]) -> str:
    art = []
    for i in range(GLYPH_HEIGHT):
        row = rows.get(i, _BLANK)
        if i in CONNECTOR_ROWS:
            row = _merge(row, _FULL)
        art.append(row)
    return "\n".join(art)


_FONT_A_ART: dict[str, str] = {
    "a": _glyph({
        6: ".#####..",
        7: "......#.",
        8: ".######.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#....##.",
        12: ".####.#.",
    }),
    "b": _glyph({
        2: "#.......",
        3: "#.......",
        4: "#.......",
        5: "#.......",
        6: "#.####..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "##....#.",
        12: "#.####..",
    }),
    "c": _glyph({
        6: ".#####..",
        7: "#.....#.",
        8: "#.......",
        9: "#.......",
        10: "#.......",
        11: "#.....#.",
        12: ".#####..",
    }),
    "d": _glyph({
        2: "......#.",
        3: "......#.",
        4: "......#.",
        5: "......#.",
        6: ".####.#.",
        7: "#....##.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#....##.",
        12: ".####.#.",
    }),
    "e": _glyph({
        6: ".#####..",
        7: "#.....#.",
        8: "#.....#.",
        9: "#######.",
        10: "#.......",
        11: "#.....#.",
        12: ".#####..",
    }),
    "f": _glyph({
        2: "..#####.",
        3: ".#......",
        4: ".#......",
        5: ".#......",
        6: "######..",
        7: ".#......",
        8: ".#......",
        9: ".#......",
        10: ".#......",
        11: ".#......",
        12: ".#......",
    }),
    "g": _glyph({
        6: ".####.#.",
        7: "#....##.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#....##.",
        11: ".####.#.",
        12: "......#.",
        13: "......#.",
        14: "#.....#.",
        15: ".#####..",
    }),
    "h": _glyph({
        2: "#.......",
        3: "#.......",
        4: "#.......",
        5: "#.......",
        6: "#.####..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#.....#.",
        12: "#.....#.",
    }),
    "i": _glyph({
        6: "..###...",
        7: "...#....",
        8: "...#....",
        9: "...#....",
        10: "...#....",
        11: "...#....",
        12: "#######.",
    }),
    "j": _glyph({
        6: "..#####.",
        7: ".....#..",
        8: ".....#..",
        9: ".....#..",
        10: ".....#..",
        11: ".....#..",
        12: ".....#..",
        13: ".....#..",
        14: "#....#..",
        15: ".####...",
    }),
    "k": _glyph({
        2: "#.......",
        3: "#.......",
        4: "#.......",
        5: "#.......",
        6: "#....##.",
        7: "#...##..",
        8: "#..##...",
        9: "####....",
        10: "#..##...",
        11: "#...##..",
        12: "#....##.",
    }),
    "l": _glyph({
        2: ".##.....",
        3: "..#.....",
        4: "..#.....",
        5: "..#.....",
        6: "..#.....",
        7: "..#.....",
        8: "..#.....",
        9: "..#.....",
        10: "..#.....",
        11: "..#.....",
        12: "#######.",
    }),
    "m": _glyph({
        6: "###.###.",
        7: "#..#..#.",
        8: "#..#..#.",
        9: "#..#..#.",
        10: "#..#..#.",
        11: "#..#..#.",
        12: "#..#..#.",
    }),
    "n": _glyph({
        6: "#.####..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#.....#.",
        12: "#.....#.",
    }),
    "o": _glyph({
        6: ".#####..",
        7: "#.....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#.....#.",
        12: ".#####..",
    }),
    "p": _glyph({
        6: "#.####..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "##....#.",
        11: "#.####..",
        12: "#.......",
        13: "#.......",
        14: "#.......",
        15: "#.......",
    }),
    "q": _glyph({
        6: ".####.#.",
        7: "#....##.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#....##.",
        11: ".####.#.",
        12: "......#.",
        13: "......#.",
        14: "......#.",
        15: "......#.",
    }),
    "r": _glyph({
        6: "#.####..",
        7: "##....#.",
        8: "#.......",
        9: "#.......",
        10: "#.......",
        11: "#.......",
        12: "#.......",
    }),
    "s": _glyph({
        6: ".######.",
        7: "#.......",
        8: "#.......",
        9: ".#####..",
        10: "......#.",
        11: "......#.",
        12: "######..",
    }),
    "t": _glyph({
        2: "..#.....",
        3: "..#.....",
        4: "..#.....",
        5: "..#.....",
        6: "#######.",
        7: "..#.....",
        8: "..#.....",
        9: "..#.....",
        10: "..#.....",
        11: "..#.....",
        12: "..####..",
    }),
    "u": _glyph({
        6: "#.....#.",
        7: "#.....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#....##.",
        12: ".####.#.",
    }),
    "v": _glyph({
        6: "#.....#.",
        7: "#.....#.",
        8: ".#...#..",
        9: ".#...#..",
        10: "..#.#...",
        11: "..#.#...",
        12: "...#....",
    }),
    "w": _glyph({
        6: "#..#..#.",
        7: "#..#..#.",
        8: "#..#..#.",
        9: "#..#..#.",
        10: "#..#..#.",
        11: "#..#..#.",
        12: ".##.##..",
    }),
    "x": _glyph({
        6: "##...##.",
        7: ".#...#..",
        8: "..#.#...",
        9: "...#....",
        10: "..#.#...",
        11: ".#...#..",
        12: "##...##.",
    }),
    "y": _glyph({
        6: "#.....#.",
        7: "#.....#.",
        8: "#.....#.",
        9: ".#...#..",
        10: "..#.#...",
        11: "...##...",
        12: "...#....",
        13: "..##....",
        14: ".##.....",
        15: "##......",
    }),
    "z": _glyph({
        6: "#######.",
        7: ".....#..",
        8: "....#...",
        9: "...#....",
        10: "..#.....",
        11: ".#......",
        12: "#######.",
    }),
}

_FONT_B_ART: dict[str, str] = {
    "a": _glyph({
        6: ".#####..",
        7: ".....##.",
        8: ".######.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#....##.",
        12: ".####.#.",
    }),
    "b": _glyph({
        2: "#.......",
        3: "#.......",
        4: "#.......",
        5: "#.......",
        6: "######..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "##....#.",
        12: "######..",
    }),
    "c": _glyph({
        6: ".######.",
        7: "#.....#.",
        8: "#.......",
        9: "#.......",
        10: "#.......",
        11: "#.....#.",
        12: ".######.",
    }),
    "d": _glyph({
        2: "......#.",
        3: "......#.",
        4: "......#.",
        5: "......#.",
        6: ".######.",
        7: "#....##.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#...###.",
        12: ".####.#.",
    }),
    "e": _glyph({
        6: ".######.",
        7: "#.....#.",
        8: "#.....#.",
        9: "######..",
        10: "#.......",
        11: "#.....#.",
        12: ".#####..",
    }),
    "f": _glyph({
        2: ".######.",
        3: ".#......",
        4: ".#......",
        5: ".#......",
        6: "######..",
        7: ".#......",
        8: ".#......",
        9: ".#......",
        10: ".#......",
        11: ".#......",
        12: ".##.....",
    }),
    "g": _glyph({
        6: ".####.#.",
        7: "#....##.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#....##.",
        11: ".####.#.",
        12: "......#.",
        13: "......#.",
        14: "#.....#.",
        15: "######..",
    }),
    "h": _glyph({
        2: "#.......",
        3: "#.......",
        4: "#.......",
        5: "#.......",
        6: "######..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#.....#.",
        12: "#.....#.",
    }),
    "i": _glyph({
        6: ".####...",
        7: "...#....",
        8: "...#....",
        9: "...#....",
        10: "...#....",
        11: "...#....",
        12: "#######.",
    }),
    "j": _glyph({
        6: ".######.",
        7: ".....#..",
        8: ".....#..",
        9: ".....#..",
        10: ".....#..",
        11: ".....#..",
        12: ".....#..",
        13: ".....#..",
        14: "#....#..",
        15: ".####...",
    }),
    "k": _glyph({
        2: "#.......",
        3: "#.......",
        4: "#.......",
        5: "#.......",
        6: "#....##.",
        7: "#...##..",
        8: "#..##...",
        9: "#####...",
        10: "#..##...",
        11: "#...##..",
        12: "#....##.",
    }),
    "l": _glyph({
        2: "###.....",
        3: "..#.....",
        4: "..#.....",
        5: "..#.....",
        6: "..#.....",
        7: "..#.....",
        8: "..#.....",
        9: "..#.....",
        10: "..#.....",
        11: "..#.....",
        12: "#######.",
    }),
    "m": _glyph({
        6: "#######.",
        7: "#..#..#.",
        8: "#..#..#.",
        9: "#..#..#.",
        10: "#..#..#.",
        11: "#..#..#.",
        12: "#..#..#.",
    }),
    "n": _glyph({
        6: "######..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#.....#.",
        12: "#.....#.",
    }),
    "o": _glyph({
        6: "#######.",
        7: "#.....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#.....#.",
        12: "#######.",
    }),
    "p": _glyph({
        6: "######..",
        7: "##....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "##....#.",
        11: "#.####..",
        12: "#.......",
        13: "#.......",
        14: "#.......",
        15: "#.......",
    }),
    "q": _glyph({
        6: ".######.",
        7: "#....##.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#....##.",
        11: ".####.#.",
        12: "......#.",
        13: "......#.",
        14: "......#.",
        15: "......#.",
    }),
    "r": _glyph({
        6: "######..",
        7: "##....#.",
        8: "#.......",
        9: "#.......",
        10: "#.......",
        11: "#.......",
        12: "#.......",
    }),
    "s": _glyph({
        6: ".######.",
        7: "#.......",
        8: "#.......",
        9: "######..",
        10: "......#.",
        11: "......#.",
        12: "######..",
    }),
    "t": _glyph({
        2: "..#.....",
        3: "..#.....",
        4: "..#.....",
        5: "..#.....",
        6: "#######.",
        7: "..#.....",
        8: "..#.....",
        9: "..#.....",
        10: "..#.....",
        11: "..#.....",
        12: "..#####.",
    }),
    "u": _glyph({
        6: "#.....#.",
        7: "#.....#.",
        8: "#.....#.",
        9: "#.....#.",
        10: "#.....#.",
        11: "#....##.",
        12: "#####.#.",
    }),
    "v": _glyph({
        6: "#.....#.",
        7: "#.....#.",
        8: ".#...#..",
        9: ".#...#..",
        10: "..#.#...",
        11: "..#.#...",
        12: "..##....",
    }),
    "w": _glyph({
        6: "#..#..#.",
        7: "#..#..#.",
        8: "#..#..#.",
        9: "#..#..#.",
        10: "#..#..#.",
        11: "#..#..#.",
        12: "###.###.",
    }),
    "x": _glyph({
        6: "##...##.",
        7: ".#...#..",
        8: "..#.#...",
        9: "..##....",
        10: "..#.#...",
        11: ".#...#..",
        12: "##...##.",
    }),
    "y": _glyph({
        6: "#.....#.",
        7: "#.....#.",
        8: "#.....#.",
        9: ".#...#..",
        10: "..#.#...",
        11: "...##...",
        12: "...#....",
        13: "..##....",
        14: ".##.....",
        15: "###.....",
    }),
    "z": _glyph({
        6: "#######.",
        7: ".....#..",
        8: "....#...",
        9: "..##....",
        10: "..#.....",
        11: ".#......",
        12: "#######.",
    }),
}


def _build(art: dict[str, str]) -> dict[str, np.ndarray]:
    glyphs = {}
    connector = set(CONNECTOR_ROWS)
    for ch, text in art.items():
        rows = text.split("\n")
        if len(rows) != GLYPH_HEIGHT or any(len(r) != GLYPH_WIDTH for r in rows):
            raise ValueError(f"glyph {ch!r} is not {GLYPH_WIDTH}x{GLYPH_HEIGHT}")
        bitmap = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
        body_rows = [i for i in range(GLYPH_HEIGHT) if i not in connector]
        if bitmap[body_rows, GLYPH_WIDTH - 1].any():
            raise ValueError(f"glyph {ch!r} body inks the spacing column")
        bitmap.setflags(write=False)
        glyphs[ch] = bitmap
    return glyphs


FONTS: dict[str, dict[str, np.ndarray]] = {
    "A": _build(_FONT_A_ART),
    "B": _build(_FONT_B_ART),
}

FONT_NAMES = tuple(sorted(FONTS))


def glyph_bitmap(ch: str, font: str) -> np.ndarray:
    """The (16, 8) ink mask of one character in the given font."""
    if font not in FONTS:
        raise ValueError(f"unknown font {font!r}; choose from {FONT_NAMES}")
    try:
        return FONTS[font][ch]
    except KeyError:
        raise ValueError(f"font {font} has no glyph for {ch!r}") from None


def supported_characters(font: str) -> frozenset[str]:
    if font not in FONTS:
        raise ValueError(f"unknown font {font!r}; choose from {FONT_NAMES}")
    return frozenset(FONTS[font])
