"""Text persistence for the feature database, weights, and ground truth.

All three formats are line-oriented UTF-8 with tab-separated fields and
floats printed at 17 significant digits, so a read of a write reproduces
every double bit-exactly.

Database:   WORDSPOT-DB 1 dim=93 n=<count>
            MIN <93 floats>
            MAX <93 floats>
            doc_id  word_id  x  y  w  h  <93 floats>      (one line per word)

Weights:    WORDSPOT-W 1 dim=93
            index  active(0|1)  lambda  weight            (one line per feature)

Truth:      doc_id  word_id  x  y  w  h  text             (one line per word)
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from wordspot.features import FEATURE_DIM, FeatureVector
from wordspot.imaging import BoundingBox
from wordspot.weighting import WeightVector

DB_MAGIC = "WORDSPOT-DB"
WEIGHTS_MAGIC = "WORDSPOT-W"
FORMAT_VERSION = "1"


class StoreParseError(ValueError):
    """Malformed store file; ``line`` is the 1-based offending line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _check_id(text: str, what: str) -> str:
    if not text:
        raise ValueError(f"{what} must be non-empty")
    if "\t" in text or "\n" in text or "\r" in text:
        raise ValueError(f"{what} must not contain tabs or newlines")
    return text


@dataclass(frozen=True, eq=False)
class WordRecord:
    doc_id: str
    word_id: int
    box: BoundingBox
    features: FeatureVector

    def __post_init__(self) -> None:
        _check_id(self.doc_id, "doc_id")
        if self.word_id < 0:
            raise ValueError("word_id must be non-negative")

    @property
    def ref(self) -> tuple[str, int]:
        return (self.doc_id, self.word_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WordRecord):
            return NotImplemented
        return (
            self.doc_id == other.doc_id
            and self.word_id == other.word_id
            and self.box == other.box
            and self.features == other.features
        )


@dataclass(frozen=True, eq=False)
class FeatureDatabase:
    """Indexed word records plus exact per-column extrema."""

    version: str
    records: tuple[WordRecord, ...]
    col_min: np.ndarray
    col_max: np.ndarray

    def __post_init__(self) -> None:
        records = tuple(self.records)
        refs = [r.ref for r in records]
        if len(set(refs)) != len(refs):
            raise ValueError("duplicate (doc_id, word_id) reference in database")
        col_min = np.asarray(self.col_min, dtype=np.float64).copy()
        col_max = np.asarray(self.col_max, dtype=np.float64).copy()
        if col_min.shape != (FEATURE_DIM,) or col_max.shape != (FEATURE_DIM,):
            raise ValueError(f"column statistics must have {FEATURE_DIM} entries")
        expect_min, expect_max = _extrema(records)
        if not np.array_equal(col_min, expect_min) or not np.array_equal(
            col_max, expect_max
        ):
            raise ValueError("column statistics do not match record extrema")
        col_min.setflags(write=False)
        col_max.setflags(write=False)
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "col_min", col_min)
        object.__setattr__(self, "col_max", col_max)

    @classmethod
    def from_records(cls, records) -> "FeatureDatabase":
        records = tuple(records)
        col_min, col_max = _extrema(records)
        return cls(FORMAT_VERSION, records, col_min, col_max)

    def feature_matrix(self) -> np.ndarray:
        if not self.records:
            return np.empty((0, FEATURE_DIM))
        return np.stack([r.features.values for r in self.records])

    def __len__(self) -> int:
        return len(self.records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureDatabase):
            return NotImplemented
        return (
            self.version == other.version
            and self.records == other.records
            and np.array_equal(self.col_min, other.col_min)
            and np.array_equal(self.col_max, other.col_max)
        )


def _extrema(records) -> tuple[np.ndarray, np.ndarray]:
    if not records:
        return np.zeros(FEATURE_DIM), np.zeros(FEATURE_DIM)
    matrix = np.stack([r.features.values for r in records])
    return matrix.min(axis=0), matrix.max(axis=0)


def write_db(db: FeatureDatabase, path: str | os.PathLike) -> None:
    lines = [f"{DB_MAGIC} {db.version} dim={FEATURE_DIM} n={len(db.records)}"]
    lines.append("MIN\t" + "\t".join(_fmt(v) for v in db.col_min))
    lines.append("MAX\t" + "\t".join(_fmt(v) for v in db.col_max))
    for rec in db.records:
        fields = [
            rec.doc_id,
            str(rec.word_id),
            str(rec.box.x),
            str(rec.box.y),
            str(rec.box.w),
            str(rec.box.h),
        ]
        fields.extend(_fmt(v) for v in rec.features.values)
        lines.append("\t".join(fields))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_float(token: str, line_no: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise StoreParseError(f"non-numeric {what}: {token!r}", line_no) from None


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise StoreParseError(f"non-integer {what}: {token!r}", line_no) from None


def _stats_line(line: str, line_no: int, tag: str) -> np.ndarray:
    fields = line.split("\t")
    if fields[0] != tag:
        raise StoreParseError(f"expected {tag} statistics line", line_no)
    if len(fields) != FEATURE_DIM + 1:
        raise StoreParseError(
            f"{tag} line has {len(fields) - 1} values, expected {FEATURE_DIM}",
            line_no,
        )
    return np.array(
        [_parse_float(f, line_no, f"{tag} value") for f in fields[1:]]
    )


def read_db(path: str | os.PathLike) -> FeatureDatabase:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise StoreParseError("empty database file", 1)
    header = lines[0].split(" ")
    if len(header) != 4 or header[0] != DB_MAGIC:
        raise StoreParseError(f"bad header {lines[0]!r}", 1)
    if header[1] != FORMAT_VERSION:
        raise StoreParseError(f"unsupported version {header[1]!r}", 1)
    if header[2] != f"dim={FEATURE_DIM}":
        raise StoreParseError(f"unsupported dimension field {header[2]!r}", 1)
    if not header[3].startswith("n="):
        raise StoreParseError(f"missing record count field {header[3]!r}", 1)
    count = _parse_int(header[3][2:], 1, "record count")
    if len(lines) < 3:
        raise StoreParseError("missing statistics lines", len(lines))
    col_min = _stats_line(lines[1], 2, "MIN")
    col_max = _stats_line(lines[2], 3, "MAX")
    if np.any(col_min > col_max):
        raise StoreParseError("MIN exceeds MAX", 2)
    body = lines[3:]
    if len(body) != count:
        raise StoreParseError(
            f"header promises {count} records, file has {len(body)}", 1
        )
    records = []
    for offset, line in enumerate(body):
        line_no = offset + 4
        fields = line.split("\t")
        if len(fields) != 6 + FEATURE_DIM:
            raise StoreParseError(
                f"record has {len(fields)} fields, expected {6 + FEATURE_DIM}",
                line_no,
            )
        doc_id = fields[0]
        if not doc_id:
            raise StoreParseError("empty doc_id", line_no)
        word_id = _parse_int(fields[1], line_no, "word_id")
        x, y, w, h = (
            _parse_int(fields[i], line_no, name)
            for i, name in zip(range(2, 6), ("x", "y", "w", "h"))
        )
        values = np.array(
            [_parse_float(f, line_no, "feature") for f in fields[6:]]
        )
        try:
            records.append(
                WordRecord(doc_id, word_id, BoundingBox(x, y, w, h), FeatureVector(values))
            )
        except ValueError as exc:
            raise StoreParseError(str(exc), line_no) from None
    try:
        return FeatureDatabase(FORMAT_VERSION, tuple(records), col_min, col_max)
    except ValueError as exc:
        raise StoreParseError(str(exc), 2) from None


def write_weights(weights: WeightVector, path: str | os.PathLike) -> None:
    lines = [f"{WEIGHTS_MAGIC} {FORMAT_VERSION} dim={weights.dim}"]
    for i in range(weights.dim):
        lines.append(
            "\t".join(
                (
                    str(i),
                    "1" if weights.active[i] else "0",
                    _fmt(weights.lam[i]),
                    _fmt(weights.weight[i]),
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_weights(path: str | os.PathLike) -> WeightVector:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise StoreParseError("empty weights file", 1)
    header = lines[0].split(" ")
    if len(header) != 3 or header[0] != WEIGHTS_MAGIC:
        raise StoreParseError(f"bad header {lines[0]!r}", 1)
    if header[1] != FORMAT_VERSION:
        raise StoreParseError(f"unsupported version {header[1]!r}", 1)
    if not header[2].startswith("dim="):
        raise StoreParseError(f"missing dimension field {header[2]!r}", 1)
    dim = _parse_int(header[2][4:], 1, "dimension")
    body = lines[1:]
    if len(body) != dim:
        raise StoreParseError(f"expected {dim} feature lines, got {len(body)}", 1)
    lam = np.zeros(dim)
    weight = np.zeros(dim)
    active = np.zeros(dim, dtype=bool)
    for offset, line in enumerate(body):
        line_no = offset + 2
        fields = line.split("\t")
        if len(fields) != 4:
            raise StoreParseError(
                f"feature line has {len(fields)} fields, expected 4", line_no
            )
        index = _parse_int(fields[0], line_no, "feature index")
        if index != offset:
            raise StoreParseError(f"feature index {index} out of order", line_no)
        if fields[1] not in ("0", "1"):
            raise StoreParseError(f"bad active flag {fields[1]!r}", line_no)
        active[index] = fields[1] == "1"
        lam[index] = _parse_float(fields[2], line_no, "lambda")
        weight[index] = _parse_float(fields[3], line_no, "weight")
    try:
        return WeightVector(lam=lam, weight=weight, active=active)
    except ValueError as exc:
        raise StoreParseError(str(exc), 2) from None


@dataclass(frozen=True)
class TruthRow:
    """One rasterizer ground-truth entry: where a word is and what it says."""

    doc_id: str
    word_id: int
    box: BoundingBox
    text: str

    def __post_init__(self) -> None:
        _check_id(self.doc_id, "doc_id")
        _check_id(self.text, "text")
        if self.word_id < 0:
            raise ValueError("word_id must be non-negative")


def write_truth(rows, path: str | os.PathLike) -> None:
    lines = [
        "\t".join(
            (
                row.doc_id,
                str(row.word_id),
                str(row.box.x),
                str(row.box.y),
                str(row.box.w),
                str(row.box.h),
                row.text,
            )
        )
        for row in rows
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def read_truth(path: str | os.PathLike) -> list[TruthRow]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = []
    for offset, line in enumerate(lines):
        if not line:
            continue
        line_no = offset + 1
        fields = line.split("\t")
        if len(fields) != 7:
            raise StoreParseError(
                f"truth line has {len(fields)} fields, expected 7", line_no
            )
        word_id = _parse_int(fields[1], line_no, "word_id")
        x, y, w, h = (
            _parse_int(fields[i], line_no, name)
            for i, name in zip(range(2, 6), ("x", "y", "w", "h"))
        )
        try:
            rows.append(TruthRow(fields[0], word_id, BoundingBox(x, y, w, h), fields[6]))
        except ValueError as exc:
            raise StoreParseError(str(exc), line_no) from None
    return rows
