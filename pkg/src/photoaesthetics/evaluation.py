"""Ranking, inequality and inter-rater agreement metrics."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DegenerateInput, MissingTruth


@dataclass(frozen=True)
class CurvePoint:
    n: int
    mean_beauty: float


class RatingMatrix:
    """Items x raters grid of integer grades in [1, 5].

    Built from ragged per-item judgment lists by keeping the first ``m``
    judgments of every item, ``m`` being the smallest list length.
    """

    def __init__(self, judgments):
        rows = [list(j) for j in judgments]
        if not rows:
            raise DegenerateInput("no rated items")
        m = min(len(r) for r in rows)
        if m == 0:
            raise DegenerateInput("an item has no judgments")
        grid = np.array([r[:m] for r in rows], dtype=np.int64)
        if grid.min() < 1 or grid.max() > 5:
            raise ValueError("grades must lie in [1, 5]")
        self.grades = grid

    @classmethod
    def from_records(cls, records):
        return cls(r.judgments for r in records if r.judgments)

    @property
    def n_items(self):
        return self.grades.shape[0]

    @property
    def n_raters(self):
        return self.grades.shape[1]


def spearman(a, b) -> float:
    """Pearson correlation of average ranks (tie-aware)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ValueError("spearman needs two equally long lists of at least 2 values")
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        raise DegenerateInput("rank correlation undefined for a constant list")
    ra = rankdata(a) - (a.size + 1) / 2.0
    rb = rankdata(b) - (b.size + 1) / 2.0
    rho = np.dot(ra, rb) / np.sqrt(np.dot(ra, ra) * np.dot(rb, rb))
    return float(np.clip(rho, -1.0, 1.0))


def rank_by_prediction(ranking):
    """Sort ``(photo_id, predicted)`` pairs: score descending, id ascending."""
    return sorted(ranking, key=lambda item: (-item[1], item[0]))


def beauty_at_n(ranking, truth, n: int) -> CurvePoint:
    """Mean true score of the top ``n`` photos by predicted score."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ordered = rank_by_prediction(ranking)
    for photo_id, _ in ordered:
        if photo_id not in truth:
            raise MissingTruth(f"no crowd score for photo {photo_id!r}")
    top = ordered[:n]
    if not top:
        raise DegenerateInput("empty ranking")
    return CurvePoint(n, float(np.mean([truth[pid] for pid, _ in top])))


def beauty_curve(ranking, truth, cutoffs=range(5, 101, 5)):
    return [beauty_at_n(ranking, truth, n) for n in cutoffs]


def gini(values) -> float:
    """Gini coefficient from the sorted cumulative-share formula."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size == 0 or np.any(x < 0):
        raise ValueError("gini needs a non-empty list of non-negative values")
    total = x.sum()
    if total <= 0:
        raise DegenerateInput("gini undefined when every value is zero")
    n = x.size
    ranks = np.arange(1, n + 1)
    g = 2.0 * np.dot(ranks, x) / (n * total) - (n + 1.0) / n
    return float(max(g, 0.0))


def matching_percent(matrix: RatingMatrix) -> float:
    """Average share of judgments equal to each item's modal grade, x100.

    A tie for the mode resolves to the lower grade; since only the modal
    count matters, the tie rule never changes the value.
    """
    g = matrix.grades
    if matrix.n_raters < 2:
        raise DegenerateInput("matching% needs at least 2 raters per item")
    counts = np.stack([(g == grade).sum(axis=1) for grade in range(1, 6)], axis=1)
    return float(100.0 * np.mean(counts.max(axis=1) / matrix.n_raters))


def modal_grade(grades) -> int:
    counts = np.bincount(np.asarray(grades), minlength=6)[1:]
    return int(np.argmax(counts)) + 1


def fleiss_kappa(table) -> float:
    """Fleiss' kappa from an items x categories table of rating counts."""
    table = np.asarray(table, dtype=np.float64)
    per_item = table.sum(axis=1)
    if table.ndim != 2 or np.any(per_item != per_item[0]) or per_item[0] < 2:
        raise ValueError("every item needs the same number (>= 2) of ratings")
    n_items, m = table.shape[0], per_item[0]
    p_j = table.sum(axis=0) / (n_items * m)
    p_i = (np.sum(table * table, axis=1) - m) / (m * (m - 1))
    p_bar = p_i.mean()
    p_e = np.dot(p_j, p_j)
    if p_e >= 1.0:
        raise DegenerateInput("kappa undefined when a single category is used")
    return float((p_bar - p_e) / (1.0 - p_e))


def binarize(matrix: RatingMatrix, median=None) -> np.ndarray:
    """``True`` (Beautiful) where a grade is strictly above the median."""
    if median is None:
        median = np.median(matrix.grades)
    return matrix.grades > median


def fleiss_kappa_binarized(matrix: RatingMatrix, median=None) -> float:
    """Fleiss' kappa on Beautiful / Not Beautiful labels.

    ``median`` defaults to the median of every grade in ``matrix``; pass a
    value to binarize against an external (e.g. corpus-wide) median.
    """
    if matrix.n_raters < 2:
        raise DegenerateInput("Fleiss' kappa needs at least 2 raters per item")
    labels = binarize(matrix, median)
    beautiful = labels.sum(axis=1)
    if beautiful.sum() == 0 or beautiful.sum() == labels.size:
        raise DegenerateInput("binarization produced a single label; kappa undefined")
    table = np.stack([matrix.n_raters - beautiful, beautiful], axis=1)
    return fleiss_kappa(table)


def cronbach_alpha(matrix: RatingMatrix) -> float:
    """Cronbach's alpha treating judgment slots as raters (population variances)."""
    g = matrix.grades.astype(np.float64)
    m = matrix.n_raters
    if m < 2 or matrix.n_items < 2:
        raise DegenerateInput("alpha needs at least 2 items and 2 raters")
    total_var = g.sum(axis=1).var()
    if total_var == 0:
        raise DegenerateInput("alpha undefined when every item has the same total")
    return float(m / (m - 1) * (1.0 - g.var(axis=0).sum() / total_var))
