"""Command-line entry point.

Every stage reads and writes files, so stages can be rerun independently::

    photoaesthetics extract --manifest photos.csv --out features.csv --jobs 4
    photoaesthetics train --features features.csv --manifest photos.csv \\
        --category urban --out urban.model
    photoaesthetics score --model urban.model --features features.csv --out scores.csv
    photoaesthetics surface --scores scores.csv --manifest photos.csv --top 100 --out top.csv
    photoaesthetics eval --scores scores.csv --manifest photos.csv --metric spearman
    photoaesthetics agreement --manifest photos.csv --metric fleiss
"""

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import corpus, evaluation, regression
from .errors import (AestheticsError, DegenerateInput, InsufficientData, MissingJoin,
                     MissingTruth, ParseError)
from .features.vector import extract_features, read_features, write_features
from .imaging import read_image

log = logging.getLogger("photoaesthetics")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_THRESHOLD = 0, 1, 2, 3
FAILURE_THRESHOLD = 0.10
# 800 held out of 2500 per category in the reference protocol
REFERENCE_TEST_FRACTION = 800 / 2500
SURFACE_HEADER = ["rank", "photo_id", "predicted_score", "category", "bucket"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _fmt(v):
    return format(float(v), ".17g")


def _open_out(path):
    if path is None or path == "-":
        return open(sys.stdout.fileno(), "w", newline="", encoding="utf-8", closefd=False)
    return open(path, "w", newline="", encoding="utf-8")


def _write_csv(path, header, rows):
    with _open_out(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_scores(path) -> dict:
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != ["photo_id", "predicted"]:
            raise ParseError(f"{path}: header must be photo_id,predicted")
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}:{reader.line_num}: expected 2 fields")
            try:
                out[row[0]] = float(row[1])
            except ValueError:
                raise ParseError(f"{path}:{reader.line_num}: bad score {row[1]!r}") from None
    return out


def read_ids(path) -> set:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != ["photo_id"]:
            raise ParseError(f"{path}: header must be photo_id")
        return {row[0] for row in reader if row}


# --- extract -----------------------------------------------------------------

def _extract_one(job):
    photo_id, path = job
    try:
        return photo_id, extract_features(read_image(path)), None
    except (AestheticsError, OSError, ValueError) as exc:
        return photo_id, None, f"{type(exc).__name__}: {exc}"


def cmd_extract(args):
    records = corpus.load_manifest(args.manifest)
    base = os.path.dirname(os.path.abspath(args.manifest))
    jobs = [(r.photo_id, os.path.join(base, r.path)) for r in records]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_extract_one, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        results = [_extract_one(j) for j in jobs]

    rows, failed = [], 0
    for photo_id, vec, err in results:
        if err is None:
            rows.append((photo_id, vec))
        else:
            failed += 1
            log.warning("skipping %s: %s", photo_id, err)
    write_features(args.out, rows)
    log.info("extracted %d of %d images", len(rows), len(jobs))
    if jobs and failed / len(jobs) > FAILURE_THRESHOLD:
        log.error("%d of %d images failed (> %.0f%%)", failed, len(jobs), 100 * FAILURE_THRESHOLD)
        return EXIT_THRESHOLD
    return EXIT_OK


# --- train / score -----------------------------------------------------------

def _default_test_size(n_records, n_tail, k):
    size = corpus.DEFAULT_TEST_SIZE
    if n_tail >= size and n_records - size >= k + 1:
        return size
    size = min(n_tail, round(REFERENCE_TEST_FRACTION * n_records), n_records - (k + 1))
    return max(size, 1)


def cmd_train(args):
    features = read_features(args.features)
    records = [r for r in corpus.filter_category(corpus.load_manifest(args.manifest), args.category)
               if r.mean_score is not None]
    missing = [r.photo_id for r in records if r.photo_id not in features]
    if missing:
        log.warning("%d scored %s photos have no features and are ignored (e.g. %s)",
                    len(missing), args.category, missing[0])
        records = [r for r in records if r.photo_id in features]
    if not records:
        raise InsufficientData(f"no scored {args.category} photos with features")

    test_size = args.test_size
    if test_size is None:
        n_tail = sum(r.bucket == "tail" for r in records)
        test_size = _default_test_size(len(records), n_tail, args.components)
        if test_size != corpus.DEFAULT_TEST_SIZE:
            log.warning("holding out %d tail photos for test (corpus too small for %d)",
                        test_size, corpus.DEFAULT_TEST_SIZE)
    train, test = corpus.split_train_test(records, args.category, test_size, args.seed)

    X = np.array([features[r.photo_id] for r in train])
    y = np.array([r.mean_score for r in train])
    model = regression.plsr_fit(X, y, args.components, category=args.category)
    with open(args.out, "wb") as fh:
        fh.write(regression.save_model(model))
    split_path = args.split_out or args.out + ".test.csv"
    _write_csv(split_path, ["photo_id"], ([r.photo_id] for r in test))
    log.info("trained %s model on %d photos with %d components; %d held out in %s",
             args.category, len(train), model.components, len(test), split_path)
    return EXIT_OK


def cmd_score(args):
    with open(args.model, "rb") as fh:
        model = regression.load_model(fh.read())
    features = read_features(args.features)
    ids = list(features)
    preds = model.predict(np.array([features[i] for i in ids])) if ids else []
    _write_csv(args.out, ["photo_id", "predicted"], ([i, _fmt(p)] for i, p in zip(ids, preds)))
    return EXIT_OK


# --- surface / eval ----------------------------------------------------------

def _join(scores, records):
    by_id = {r.photo_id: r for r in records}
    absent = [pid for pid in scores if pid not in by_id]
    if absent:
        raise MissingJoin(f"{len(absent)} scored photos are not in the manifest (e.g. {absent[0]!r})")
    return by_id


def surface(scores, records, bucket="tail", top=None):
    """Rank scored photos of one popularity bucket, best first."""
    by_id = _join(scores, records)
    pool = [(pid, s) for pid, s in scores.items() if by_id[pid].bucket == bucket]
    ranked = evaluation.rank_by_prediction(pool)[:top]
    return [(rank, pid, s, by_id[pid].category, bucket)
            for rank, (pid, s) in enumerate(ranked, start=1)]


def cmd_surface(args):
    scores = read_scores(args.scores)
    rows = surface(scores, corpus.load_manifest(args.manifest), args.bucket, args.top)
    if not rows:
        log.warning("no scored photos in the %s bucket", args.bucket)
    _write_csv(args.out, SURFACE_HEADER,
               ([rank, pid, _fmt(s), cat, b] for rank, pid, s, cat, b in rows))
    return EXIT_OK


def cmd_eval(args):
    records = corpus.load_manifest(args.manifest)
    if args.category:
        records = corpus.filter_category(records, args.category)

    if args.metric == "gini":
        groups = _by_category(records)
        rows = [[cat, "gini", _fmt(evaluation.gini([r.favorites for r in recs]))]
                for cat, recs in groups]
        _write_csv(args.out, ["category", "metric", "value"], rows)
        return EXIT_OK

    if args.scores is None:
        raise UsageError(f"--scores is required for metric {args.metric}")
    scores = read_scores(args.scores)
    by_id = _join(scores, corpus.load_manifest(args.manifest))
    wanted = {r.photo_id for r in records}
    if args.ids:
        wanted &= read_ids(args.ids)
    if args.bucket:
        wanted = {pid for pid in wanted if by_id[pid].bucket == args.bucket}
    scored = [(pid, s) for pid, s in scores.items() if pid in wanted]
    truth = {pid: by_id[pid].mean_score for pid, _ in scored if by_id[pid].mean_score is not None}

    if args.metric == "beauty-at-n":
        curve = evaluation.beauty_curve(scored, truth, range(args.n_min, args.n_max + 1, args.n_step))
        _write_csv(args.out, ["n", "mean_beauty"], ([p.n, _fmt(p.mean_beauty)] for p in curve))
        return EXIT_OK

    unlabeled = [pid for pid, _ in scored if pid not in truth]
    if unlabeled:
        raise MissingTruth(f"no crowd score for photo {unlabeled[0]!r}")
    def rho(recs):
        ids = [r.photo_id for r in recs]
        return evaluation.spearman([scores[i] for i in ids], [truth[i] for i in ids])

    rows = _per_category(_by_category([by_id[pid] for pid, _ in scored]), "spearman", rho)
    _write_csv(args.out, ["category", "metric", "value"], rows)
    return EXIT_OK


def _per_category(groups, metric, fn):
    """Evaluate ``fn`` on every group; undefined groups are skipped with a warning."""
    rows, last_error = [], None
    for cat, recs in groups:
        try:
            rows.append([cat, metric, _fmt(fn(recs))])
        except DegenerateInput as exc:
            log.warning("%s undefined for %s: %s", metric, cat, exc)
            last_error = exc
    if not rows and last_error is not None:
        raise last_error
    return rows


def _by_category(records):
    groups = [(c, [r for r in records if r.category == c]) for c in corpus.CATEGORIES]
    groups = [(c, recs) for c, recs in groups if recs]
    if len(groups) > 1:
        groups.append(("all", list(records)))
    return groups


# --- agreement ---------------------------------------------------------------

def cmd_agreement(args):
    records = [r for r in corpus.load_manifest(args.manifest) if r.judgments]
    if not records:
        raise DegenerateInput("manifest carries no judgments")
    global_median = float(np.median(evaluation.RatingMatrix.from_records(records).grades))
    median = global_median if args.median_scope == "global" else None
    metric = {
        "matching": evaluation.matching_percent,
        "fleiss": lambda m: evaluation.fleiss_kappa_binarized(m, median),
        "cronbach": evaluation.cronbach_alpha,
    }[args.metric]
    rows = _per_category(_by_category(records), args.metric,
                         lambda recs: metric(evaluation.RatingMatrix.from_records(recs)))
    _write_csv(args.out, ["category", "metric", "value"], rows)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="photoaesthetics",
                     description="Extract aesthetic features, train per-category beauty models, "
                                 "score photos and surface the best low-popularity ones.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="compute 47-d feature vectors for a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="fit a per-category PLSR model")
    p.add_argument("--features", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--category", required=True, choices=corpus.CATEGORIES)
    p.add_argument("--components", type=_positive_int, default=regression.DEFAULT_COMPONENTS)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--test-size", type=_positive_int, default=None,
                   help="tail photos held out for test (default 800, reduced for small corpora)")
    p.add_argument("--split-out", help="held-out id list (default: <out>.test.csv)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="predict beauty scores with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("surface", help="rank one popularity bucket by predicted beauty")
    p.add_argument("--scores", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--bucket", choices=corpus.BUCKETS, default="tail")
    p.add_argument("--top", type=_positive_int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("eval", help="compare predictions with crowd scores")
    p.add_argument("--scores")
    p.add_argument("--manifest", required=True)
    p.add_argument("--metric", required=True, choices=("spearman", "beauty-at-n", "gini"))
    p.add_argument("--category", choices=corpus.CATEGORIES)
    p.add_argument("--bucket", choices=corpus.BUCKETS)
    p.add_argument("--ids", help="photo_id CSV restricting the evaluated set (e.g. a test split)")
    p.add_argument("--n-min", type=_positive_int, default=5)
    p.add_argument("--n-max", type=_positive_int, default=100)
    p.add_argument("--n-step", type=_positive_int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("agreement", help="inter-rater agreement of crowd judgments")
    p.add_argument("--manifest", required=True)
    p.add_argument("--metric", required=True, choices=("matching", "fleiss", "cronbach"))
    p.add_argument("--median-scope", choices=("global", "category"), default="global")
    p.add_argument("--out")
    p.set_defaults(func=cmd_agreement)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"photoaesthetics: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"photoaesthetics: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AestheticsError, OSError) as exc:
        print(f"photoaesthetics: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
