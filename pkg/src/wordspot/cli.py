"""Command-line surface: render, index, weigh, query, eval, cluster.

Every subcommand exits 0 on success and nonzero with a one-line diagnostic
on any expected failure (bad input file, malformed store, degenerate data).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from wordspot import corpus as corpus_mod
from wordspot import report as report_mod
from wordspot.evaluation import RelevanceJudgments, run_experiment
from wordspot.clustering import cluster_quality, ik_means
from wordspot.features import FeatureVector, extract_features
from wordspot.imaging import (
    GrayImage,
    crop,
    preprocess_page,
    preprocess_word,
    read_image,
)
from wordspot.matching import MatchConfig, rank_query
from wordspot.segmentation import SegmentationConfig, segment_words
from wordspot.store import (
    FeatureDatabase,
    WordRecord,
    read_db,
    read_truth,
    read_weights,
    write_db,
    write_weights,
)
from wordspot.weighting import compute_weights, correlation_matrix, uniform_weights_for


def _page_paths(pages_dir: Path) -> list[Path]:
    paths = sorted(
        p for p in pages_dir.iterdir() if p.suffix.lower() in (".pbm", ".pgm")
    )
    if not paths:
        raise ValueError(f"no .pbm/.pgm pages found in {pages_dir}")
    return paths


def index_page(path: Path, cfg: SegmentationConfig) -> list[WordRecord]:
    """Preprocess one page and extract a record per segmented word."""
    image = read_image(path)
    page = preprocess_page(image)
    records = []
    for word_id, box in enumerate(segment_words(page, cfg)):
        features = extract_features(crop(page, box))
        records.append(WordRecord(path.stem, word_id, box, features))
    return records


def build_database(
    page_paths: list[Path], cfg: SegmentationConfig, jobs: int = 1
) -> FeatureDatabase:
    """Index pages in filename order; per-page work may run in parallel."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_page = list(pool.map(index_page, page_paths, [cfg] * len(page_paths)))
    else:
        per_page = [index_page(path, cfg) for path in page_paths]
    records = [rec for page in per_page for rec in page]
    return FeatureDatabase.from_records(records)


def query_features(word: str, font: str, scale: int) -> FeatureVector:
    """Render a text query and push it through the word pipeline."""
    rendered = corpus_mod.render_query(word, font, scale)
    return extract_features(preprocess_word(rendered))


def _query_image_features(path: Path) -> FeatureVector:
    image = read_image(path)
    if isinstance(image, GrayImage):
        raise ValueError("query images must be PBM bitmaps")
    return extract_features(preprocess_word(image))


def _read_query_words(path: Path) -> list[str]:
    words = []
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    if not words:
        raise ValueError(f"no query words in {path}")
    return words


def _match_config(args, top_k=None) -> MatchConfig:
    return MatchConfig(
        p=1.0,
        normalize=not args.raw,
        threshold=args.threshold,
        top_k=top_k,
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_render(args) -> int:
    spec = corpus_mod.load_spec(args.spec)
    pages, truth = corpus_mod.render_corpus(spec, args.out)
    print(f"rendered {len(pages)} pages and {truth.name} into {args.out}")
    return 0


def cmd_index(args) -> int:
    cfg = SegmentationConfig(word_gap_factor=args.seg_gap)
    paths = _page_paths(Path(args.pages))
    db = build_database(paths, cfg, jobs=args.jobs)
    write_db(db, args.out)
    print(f"indexed {len(db)} words from {len(paths)} pages into {args.out}")
    return 0


def cmd_weigh(args) -> int:
    db = read_db(args.db)
    weights = compute_weights(correlation_matrix(db))
    write_weights(weights, args.out)
    print("index\tactive\tlambda\tweight")
    for i in range(weights.dim):
        print(
            f"{i}\t{int(weights.active[i])}\t{weights.lam[i]:.6f}"
            f"\t{weights.weight[i]:.6f}"
        )
    if args.plot:
        report_mod.save_weight_figure(weights, args.plot)
        print(f"weight profile figure written to {args.plot}", file=sys.stderr)
    return 0


def cmd_query(args) -> int:
    db = read_db(args.db)
    if args.uniform_weights:
        weights = uniform_weights_for(db)
    else:
        if not args.weights:
            raise ValueError("provide --weights or pass --uniform-weights")
        weights = read_weights(args.weights)
    if args.word:
        query = query_features(args.word, args.font, args.scale)
    else:
        query = _query_image_features(Path(args.image))
    cfg = _match_config(args, top_k=args.top)
    result = rank_query(query, db, weights, cfg)
    print("rank\tdoc_id\tword_id\tdistance")
    for rank, (ref, distance) in enumerate(result.retrieved, start=1):
        print(f"{rank}\t{ref[0]}\t{ref[1]}\t{distance:.9g}")
    print(
        f"{len(result.retrieved)} of {len(result.entries)} records retrieved "
        f"at threshold {cfg.threshold}",
        file=sys.stderr,
    )
    return 0


def cmd_eval(args) -> int:
    db = read_db(args.db)
    weights = read_weights(args.weights)
    judgments = RelevanceJudgments.from_truth(db, read_truth(args.truth))
    words = _read_query_words(Path(args.queries))
    queries = [
        (word, preprocess_word(corpus_mod.render_query(word, args.font, args.scale)))
        for word in words
    ]
    cfg = _match_config(args)
    weighted = run_experiment(db, judgments, queries, weights, cfg)
    print(weighted.summary("weighted retrieval"))
    uniform_report = None
    if args.compare_uniform:
        uniform = uniform_weights_for(db)
        uniform_report = run_experiment(db, judgments, queries, uniform, cfg)
        print()
        print(uniform_report.summary("uniform-weight retrieval"))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        lines = weighted.to_tsv_lines("weighted")
        if uniform_report is not None:
            lines += uniform_report.to_tsv_lines("uniform")
        (out_dir / "report.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        report_mod.save_pr_figure(weighted, out_dir / "report.png", uniform_report)
        print(f"report.tsv and report.png written to {out_dir}", file=sys.stderr)
    return 0


def cmd_cluster(args) -> int:
    db = read_db(args.db)
    weights = read_weights(args.weights) if args.weights else None
    cfg = MatchConfig(p=1.0, normalize=not args.raw)
    model = ik_means(db, args.threshold, weights, cfg)
    print("doc_id\tword_id\tcluster")
    for rec, cluster in zip(db.records, model.assignment):
        print(f"{rec.doc_id}\t{rec.word_id}\t{cluster}")
    mean_intra, min_inter, ratio = cluster_quality(model, db, weights, cfg)
    inter_text = "inf" if not np.isfinite(min_inter) else f"{min_inter:.6f}"
    print(
        f"clusters={model.k} mean_intra={mean_intra:.6f} "
        f"min_inter={inter_text} ratio={ratio:.6f}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordspot",
        description="word-image retrieval: render, index, weigh, query, eval, cluster",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="rasterize a synthetic corpus")
    p.add_argument("--spec", required=True, help="flat key=value corpus spec file")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("index", help="preprocess, segment, and extract features")
    p.add_argument("--pages", required=True, help="directory of .pbm/.pgm pages")
    p.add_argument("--out", required=True, help="database file to write")
    p.add_argument("--seg-gap", type=float, default=0.35,
                   help="word gap factor (fraction of band height)")
    p.add_argument("--jobs", type=int, default=1, help="parallel page workers")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("weigh", help="learn per-feature weights from a database")
    p.add_argument("--db", required=True)
    p.add_argument("--out", required=True, help="weights file to write")
    p.add_argument("--plot", help="optional weight-profile figure (png)")
    p.set_defaults(func=cmd_weigh)

    p = sub.add_parser("query", help="rank database words against one query")
    p.add_argument("--db", required=True)
    p.add_argument("--weights")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--word", help="query text rendered with the built-in font")
    source.add_argument("--image", help="query PBM word image")
    p.add_argument("--font", choices=("A", "B"), default="A")
    p.add_argument("--scale", type=int, default=2)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--top", type=int, default=None, help="cap the retrieved set")
    p.add_argument("--raw", action="store_true",
                   help="skip min-max column normalization")
    p.add_argument("--uniform-weights", action="store_true",
                   help="unweighted baseline ranking")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="precision/recall experiment over a query file")
    p.add_argument("--db", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--truth", required=True, help="rasterizer ground-truth TSV")
    p.add_argument("--queries", required=True, help="file with one query word per line")
    p.add_argument("--font", choices=("A", "B"), default="A")
    p.add_argument("--scale", type=int, default=2)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--compare-uniform", action="store_true",
                   help="also run the uniform-weight baseline")
    p.add_argument("--out-dir", help="write report.tsv and report.png here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cluster", help="threshold-seeded k-means over the database")
    p.add_argument("--db", required=True)
    p.add_argument("--weights")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--raw", action="store_true")
    p.set_defaults(func=cmd_cluster)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"wordspot {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
