"""Photo manifests, popularity buckets and the train/test protocol."""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, ParseError, ValidationError

CATEGORIES = ("people", "nature", "animals", "urban")
BUCKETS = ("tail", "torso", "head")
MANIFEST_HEADER = ["photo_id", "path", "category", "favorites", "score", "judgments"]
DEFAULT_TEST_SIZE = 800
TAIL_MAX = 5
TORSO_MAX = 45


@dataclass(frozen=True)
class PhotoRecord:
    photo_id: str
    path: str
    category: str
    favorites: int
    judgments: tuple = ()
    mean_score: float | None = None

    @property
    def bucket(self) -> str:
        return popularity_bucket(self.favorites)


def popularity_bucket(favorites: int) -> str:
    """``tail`` for f <= 5, ``torso`` for 5 < f <= 45, ``head`` above."""
    if favorites < 0:
        raise ValueError(f"favorites must be non-negative, got {favorites}")
    if favorites <= TAIL_MAX:
        return "tail"
    if favorites <= TORSO_MAX:
        return "torso"
    return "head"


def _parse_row(row, lineno):
    photo_id, path, category, favorites, score, judgments = (v.strip() for v in row)
    where = f"row {lineno}"
    if not photo_id:
        raise ValidationError(f"{where}: empty photo_id")
    if category not in CATEGORIES:
        raise ValidationError(f"{where} ({photo_id}): unknown category {category!r}")
    try:
        fav = int(favorites)
    except ValueError:
        raise ValidationError(f"{where} ({photo_id}): favorites {favorites!r} is not an integer") from None
    if fav < 0:
        raise ValidationError(f"{where} ({photo_id}): negative favorites {fav}")

    grades = ()
    if judgments:
        try:
            grades = tuple(int(g) for g in judgments.split("|"))
        except ValueError:
            raise ValidationError(f"{where} ({photo_id}): malformed judgments {judgments!r}") from None
        bad = [g for g in grades if not 1 <= g <= 5]
        if bad:
            raise ValidationError(f"{where} ({photo_id}): judgment {bad[0]} outside [1, 5]")

    mean = None
    if score:
        try:
            mean = float(score)
        except ValueError:
            raise ValidationError(f"{where} ({photo_id}): score {score!r} is not a number") from None
        if not (math.isfinite(mean) and 1.0 <= mean <= 5.0):
            raise ValidationError(f"{where} ({photo_id}): score {mean} outside [1, 5]")
    if grades:
        recomputed = sum(grades) / len(grades)
        if mean is not None and abs(mean - recomputed) > 1e-9:
            raise ValidationError(
                f"{where} ({photo_id}): score {mean} disagrees with judgment mean {recomputed}")
        mean = recomputed
    return PhotoRecord(photo_id, path, category, fav, grades, mean)


def load_manifest(path) -> list:
    """Read and validate a manifest CSV.

    Raises
    ------
    ParseError
        Wrong header or wrong field count on some row.
    ValidationError
        A row breaks a record invariant; the message names the row.
    """
    records = []
    seen = set()
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh, strict=True)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != MANIFEST_HEADER:
                raise ParseError(f"{path}: header must be {','.join(MANIFEST_HEADER)}")
            for row in reader:
                lineno = reader.line_num
                if not row:
                    continue
                if len(row) != len(MANIFEST_HEADER):
                    raise ParseError(f"{path}: row {lineno} has {len(row)} fields, "
                                     f"expected {len(MANIFEST_HEADER)}")
                rec = _parse_row(row, lineno)
                if rec.photo_id in seen:
                    raise ValidationError(f"row {lineno}: duplicate photo_id {rec.photo_id!r}")
                seen.add(rec.photo_id)
                records.append(rec)
    except csv.Error as exc:
        raise ParseError(f"{path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc})") from None
    return records


def save_manifest(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for r in records:
            writer.writerow([
                r.photo_id, r.path, r.category, r.favorites,
                "" if r.mean_score is None else repr(r.mean_score),
                "|".join(map(str, r.judgments)),
            ])


def filter_category(records, category):
    return [r for r in records if r.category == category]


def split_train_test(records, category, test_size=DEFAULT_TEST_SIZE, seed=42):
    """Hold out ``test_size`` tail photos of ``category`` for testing.

    Test photos are drawn only from the tail bucket; training keeps every
    other photo of the category from all buckets, in input order. The
    draw depends only on the seed and the set of tail photo ids.
    """
    pool = filter_category(records, category)
    tail = sorted((r for r in pool if r.bucket == "tail"), key=lambda r: r.photo_id)
    if test_size < 1:
        raise ValueError(f"test_size must be positive, got {test_size}")
    if len(tail) < test_size:
        raise InsufficientData(
            f"{category}: {len(tail)} tail photos, cannot hold out {test_size} for test")
    if test_size >= len(pool):
        raise InsufficientData(f"{category}: test_size {test_size} leaves no training photos")
    order = np.random.default_rng(seed).permutation(len(tail))[:test_size]
    test = [tail[i] for i in sorted(order)]
    test_ids = {r.photo_id for r in test}
    train = [r for r in pool if r.photo_id not in test_ids]
    return train, test
