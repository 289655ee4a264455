"""Precision/recall computation and the batch query experiment harness.

Relevance is exact text match against rasterizer ground truth: a database
record is relevant to a query word when the truth row it overlaps carries
that word.  Precision and recall are percentages; empty-set conventions make
both total (see ``precision_recall``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from wordspot.features import extract_features
from wordspot.imaging import BinaryImage, BoundingBox
from wordspot.matching import DEFAULT_MATCH, MatchConfig, Ref, rank_query
from wordspot.store import FeatureDatabase, TruthRow
from wordspot.weighting import WeightVector


def precision_recall(retrieved: set, relevant: set) -> tuple[float, float]:
    """Percent precision and recall of a retrieved set.

    Conventions: empty retrieved and empty relevant give (100, 100); empty
    retrieved against non-empty relevant gives (0, 0); recall is 100 when
    nothing is relevant.
    """
    hits = len(retrieved & relevant)
    if retrieved:
        precision = 100.0 * hits / len(retrieved)
    else:
        precision = 100.0 if not relevant else 0.0
    recall = 100.0 if not relevant else 100.0 * hits / len(relevant)
    return precision, recall


def _iou(a: BoundingBox, b: BoundingBox) -> float:
    ix = max(0, min(a.x2, b.x2) - max(a.x, b.x))
    iy = max(0, min(a.y2, b.y2) - max(a.y, b.y))
    inter = ix * iy
    union = a.w * a.h + b.w * b.h - inter
    return inter / union if union else 0.0


@dataclass(frozen=True)
class RelevanceJudgments:
    """Query word -> database references whose ground-truth text matches."""

    by_word: dict

    @classmethod
    def from_truth(
        cls, db: FeatureDatabase, truth_rows: Iterable[TruthRow], min_iou: float = 0.5
    ) -> "RelevanceJudgments":
        """Map each truth row onto the database record it overlaps best.

        Rows are matched within their document by box IoU; a row whose best
        overlap falls below ``min_iou`` has no reliably indexed counterpart,
        which is an error (the judgments would silently under-count).
        """
        by_doc: dict[str, list] = {}
        for rec in db.records:
            by_doc.setdefault(rec.doc_id, []).append(rec)
        by_word: dict[str, set[Ref]] = {}
        for row in truth_rows:
            candidates = by_doc.get(row.doc_id, [])
            best, best_iou = None, 0.0
            for rec in candidates:
                overlap = _iou(row.box, rec.box)
                if overlap > best_iou:
                    best, best_iou = rec, overlap
            if best is None or best_iou < min_iou:
                raise ValueError(
                    f"truth row {row.doc_id}/{row.word_id} ({row.text!r}) has no "
                    f"database record with IoU >= {min_iou}"
                )
            by_word.setdefault(row.text, set()).add(best.ref)
        return cls({word: frozenset(refs) for word, refs in by_word.items()})

    def __contains__(self, word: str) -> bool:
        return word in self.by_word

    def __getitem__(self, word: str) -> frozenset:
        return self.by_word[word]

    def words(self) -> list[str]:
        return sorted(self.by_word)


@dataclass(frozen=True)
class QueryOutcome:
    word: str
    precision: float
    recall: float
    retrieved_count: int
    relevant_count: int


@dataclass(frozen=True)
class PRReport:
    """Per-query precision/recall plus unweighted averages."""

    outcomes: tuple[QueryOutcome, ...]
    avg_precision: float
    avg_recall: float

    @classmethod
    def from_outcomes(cls, outcomes: Sequence[QueryOutcome]) -> "PRReport":
        if not outcomes:
            raise ValueError("a report needs at least one query outcome")
        precision = float(np.mean([o.precision for o in outcomes]))
        recall = float(np.mean([o.recall for o in outcomes]))
        return cls(tuple(outcomes), precision, recall)

    def to_tsv_lines(self, label: str | None = None) -> list[str]:
        tag = [label] if label is not None else []
        lines = [
            "\t".join(
                tag + ["query", "precision", "recall", "retrieved", "relevant"]
            )
        ]
        for o in self.outcomes:
            lines.append(
                "\t".join(
                    tag
                    + [
                        o.word,
                        f"{o.precision:.4f}",
                        f"{o.recall:.4f}",
                        str(o.retrieved_count),
                        str(o.relevant_count),
                    ]
                )
            )
        lines.append(
            "\t".join(
                tag
                + [
                    "AVERAGE",
                    f"{self.avg_precision:.4f}",
                    f"{self.avg_recall:.4f}",
                    "",
                    "",
                ]
            )
        )
        return lines

    def summary(self, title: str = "retrieval experiment") -> str:
        width = max(len(o.word) for o in self.outcomes)
        lines = [
            f"== {title}: {len(self.outcomes)} queries ==",
            f"{'query':<{width}}  precision  recall  retrieved  relevant",
        ]
        for o in self.outcomes:
            lines.append(
                f"{o.word:<{width}}  {o.precision:9.2f}  {o.recall:6.2f}"
                f"  {o.retrieved_count:9d}  {o.relevant_count:8d}"
            )
        lines.append(
            f"average precision {self.avg_precision:.2f}%  "
            f"average recall {self.avg_recall:.2f}%"
        )
        return "\n".join(lines)


def run_experiment(
    db: FeatureDatabase,
    judgments: RelevanceJudgments,
    queries: Sequence[tuple[str, BinaryImage]],
    weights: WeightVector,
    cfg: MatchConfig = DEFAULT_MATCH,
) -> PRReport:
    """Rank every (word, preprocessed image) query and score the cutoff set.

    Every query word must have a judgments entry; identical inputs produce
    identical reports.
    """
    if not queries:
        raise ValueError("experiment needs at least one query")
    outcomes = []
    for word, image in queries:
        if word not in judgments:
            raise ValueError(f"query {word!r} has no relevance judgments")
        relevant = judgments[word]
        result = rank_query(extract_features(image), db, weights, cfg)
        retrieved = result.retrieved_refs()
        precision, recall = precision_recall(retrieved, set(relevant))
        outcomes.append(
            QueryOutcome(word, precision, recall, len(retrieved), len(relevant))
        )
    return PRReport.from_outcomes(outcomes)
