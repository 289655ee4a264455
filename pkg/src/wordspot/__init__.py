"""Word-image retrieval without OCR.

Pages of rendered text are binarized, filtered, thinned, and cut into word
boxes; each word becomes a 93-value shape descriptor.  Per-feature weights
are learned from the indexed corpus via coefficients of multiple correlation
and queries are answered by weighted Minkowski ranking.
"""

from wordspot.imaging import (
    BinaryImage,
    BoundingBox,
    GrayImage,
    NetpbmParseError,
    preprocess_page,
    preprocess_word,
    read_image,
    write_image,
)
from wordspot.features import FeatureVector, extract_features
from wordspot.segmentation import SegmentationConfig, segment_words
from wordspot.weighting import (
    WeightVector,
    compute_weights,
    correlation_matrix,
    uniform_weights,
    uniform_weights_for,
)
from wordspot.matching import MatchConfig, QueryResult, rank_query, weighted_distance
from wordspot.store import FeatureDatabase, WordRecord, read_db, write_db
from wordspot.evaluation import PRReport, precision_recall, run_experiment
from wordspot.clustering import ClusterModel, cluster_quality, ik_means
from wordspot.corpus import CorpusSpec, render_corpus, render_query

__version__ = "0.1.0"

__all__ = [
    "BinaryImage",
    "BoundingBox",
    "ClusterModel",
    "CorpusSpec",
    "FeatureDatabase",
    "FeatureVector",
    "GrayImage",
    "MatchConfig",
    "NetpbmParseError",
    "PRReport",
    "QueryResult",
    "SegmentationConfig",
    "WeightVector",
    "WordRecord",
    "cluster_quality",
    "compute_weights",
    "correlation_matrix",
    "extract_features",
    "ik_means",
    "precision_recall",
    "preprocess_page",
    "preprocess_word",
    "rank_query",
    "read_db",
    "read_image",
    "render_corpus",
    "render_query",
    "run_experiment",
    "segment_words",
    "uniform_weights",
    "uniform_weights_for",
    "weighted_distance",
    "write_db",
    "write_image",
]
