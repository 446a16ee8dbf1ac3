"""Per-category PLS1 aesthetic models: standardization, NIPALS fitting,
prediction and a plain-text model file format."""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateInput, DegenerateInputWarning, InsufficientData,
                     LayoutMismatch, ParseError)
from .features.vector import LAYOUT_VERSION

DEFAULT_COMPONENTS = 15
RESIDUAL_TOL = 1e-10
MODEL_FIELDS = ("layout_version", "category", "components", "means", "scales",
                "coefficients", "intercept")
_VECTOR_FIELDS = ("means", "scales", "coefficients")


@dataclass(frozen=True)
class StandardizationStats:
    means: np.ndarray
    scales: np.ndarray

    def transform(self, X):
        return (np.asarray(X, dtype=np.float64) - self.means) / self.scales


@dataclass(frozen=True, eq=False)
class AestheticModel:
    """Linear beauty model in standardized-feature space.

    ``components`` is the number of latent components actually extracted,
    which can be below the requested count when the features are exhausted.
    """

    category: str
    stats: StandardizationStats
    coefficients: np.ndarray
    intercept: float
    components: int
    layout_version: str = LAYOUT_VERSION

    @property
    def n_features(self) -> int:
        return len(self.coefficients)

    def predict(self, X) -> np.ndarray:
        """Scores for a batch of feature vectors, shape ``(n, p)``."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        self._check_layout(X.shape[1])
        return self.stats.transform(X) @ self.coefficients + self.intercept

    def _check_layout(self, n_features):
        if self.layout_version != LAYOUT_VERSION:
            raise LayoutMismatch(
                f"model layout {self.layout_version!r} != extractor layout {LAYOUT_VERSION!r}")
        if n_features != self.n_features:
            raise LayoutMismatch(
                f"model expects {self.n_features} features, got {n_features}")


def fit_standardization(X) -> StandardizationStats:
    """Column means and population standard deviations.

    Zero-variance columns get scale 1 and their exact common value as mean,
    so they standardize to exact zeros.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InsufficientData(f"need at least 2 samples, got {X.shape[0] if X.ndim else 0}")
    means = X.mean(axis=0)
    scales = X.std(axis=0)
    constant = np.ptp(X, axis=0) == 0
    means[constant] = X[0, constant]
    scales[constant | (scales == 0)] = 1.0
    return StandardizationStats(means=means, scales=scales)


def nipals_pls1(Z, f, n_components, tol=RESIDUAL_TOL):
    """NIPALS PLS1 on a centred predictor matrix ``Z`` and centred response ``f``.

    With a single response the inner NIPALS loop converges in one step, so
    each component is a direct projection followed by deflation.

    Returns
    -------
    coef : np.ndarray
        Regression vector folding all extracted components, ``W (P'W)^-1 q``.
    n_extracted : int
        Components actually extracted. Extraction stops when the residual
        predictor norm drops below ``tol`` or the residual response is
        orthogonal to what is left of ``Z``.
    """
    E = np.array(Z, dtype=np.float64)
    f = np.array(f, dtype=np.float64)
    p = E.shape[1]
    W = np.zeros((p, n_components))
    P = np.zeros((p, n_components))
    q = np.zeros(n_components)
    w0 = np.linalg.norm(E.T @ f)
    a = 0
    for a in range(n_components):
        if np.linalg.norm(E) < tol:
            break
        w = E.T @ f
        wn = np.linalg.norm(w)
        if wn <= tol * max(w0, 1.0):
            break
        w /= wn
        t = E @ w
        tt = t @ t
        W[:, a] = w
        P[:, a] = E.T @ t / tt
        q[a] = f @ t / tt
        E -= np.outer(t, P[:, a])
        f -= q[a] * t
    else:
        a = n_components
    W, P, q = W[:, :a], P[:, :a], q[:a]
    if a == 0:
        return np.zeros(p), 0
    coef = W @ np.linalg.solve(P.T @ W, q)
    return coef, a


def plsr_fit(X, y, k: int = DEFAULT_COMPONENTS, category: str = "") -> AestheticModel:
    """Fit a PLS1 model of beauty scores ``y`` on feature rows ``X``.

    Features are z-scored and the target centred before extraction; the
    returned coefficients act on standardized features and the intercept is
    the training mean score. If every score is equal a constant model is
    returned with a :class:`DegenerateInputWarning`.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X has shape {X.shape} but y has {y.shape[0]} entries")
    if not 1 <= k <= X.shape[1]:
        raise ValueError(f"components must be in [1, {X.shape[1]}], got {k}")
    if X.shape[0] < k + 1:
        raise InsufficientData(f"{X.shape[0]} samples cannot support {k} components")
    stats = fit_standardization(X)
    ybar = float(y.mean())
    if np.ptp(y) == 0:
        warnings.warn("all training scores are equal; fitting a constant model",
                      DegenerateInputWarning, stacklevel=2)
        return AestheticModel(category, stats, np.zeros(X.shape[1]), float(y[0]), 1)
    coef, n = nipals_pls1(stats.transform(X), y - ybar, k)
    return AestheticModel(category, stats, coef, ybar, max(n, 1))


def plsr_predict(model: AestheticModel, x) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    model._check_layout(x.shape[0])
    return float(model.stats.transform(x) @ model.coefficients + model.intercept)


def r_squared(y, pred) -> float:
    y = np.asarray(y, dtype=np.float64)
    ss_res = np.sum((y - pred) ** 2)
    ss_tot = np.sum((y - y.mean()) ** 2)
    if ss_tot == 0:
        raise DegenerateInput("R^2 undefined for a constant target")
    return float(1.0 - ss_res / ss_tot)


def _fmt(v):
    return format(float(v), ".17g")


def save_model(model: AestheticModel) -> bytes:
    """Serialize as UTF-8 ``key = value`` lines, reals at 17 significant digits."""
    if any(c in model.category for c in "\r\n"):
        raise ValueError("category label must be a single line")
    lines = [
        f"layout_version = {model.layout_version}",
        f"category = {model.category}",
        f"components = {model.components}",
        "means = " + " ".join(map(_fmt, model.stats.means)),
        "scales = " + " ".join(map(_fmt, model.stats.scales)),
        "coefficients = " + " ".join(map(_fmt, model.coefficients)),
        f"intercept = {_fmt(model.intercept)}",
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_model(data: bytes) -> AestheticModel:
    """Inverse of :func:`save_model`.

    Raises
    ------
    LayoutMismatch
        The document declares a layout other than the extractor's.
    ParseError
        Missing, duplicate or unknown keys, bad numbers, or vectors of
        inconsistent length (e.g. a truncated file).
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"model file is not UTF-8: {exc}") from None
    fields = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition(" = ")
        if not sep and line.endswith(" ="):
            key, sep, value = line[:-2], " =", ""
        key = key.strip()
        if not sep or key not in MODEL_FIELDS:
            raise ParseError(f"line {lineno}: unrecognised entry {line[:40]!r}")
        if key in fields:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value
    if "layout_version" in fields and fields["layout_version"].strip() != LAYOUT_VERSION:
        raise LayoutMismatch(f"unknown layout_version {fields['layout_version'].strip()!r}")
    missing = [k for k in MODEL_FIELDS if k not in fields]
    if missing:
        raise ParseError(f"model file lacks {', '.join(missing)}")
    try:
        vectors = {k: np.array([float(v) for v in fields[k].split()]) for k in _VECTOR_FIELDS}
        components = int(fields["components"])
        intercept = float(fields["intercept"])
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    n = len(vectors["coefficients"])
    if n == 0 or any(len(v) != n for v in vectors.values()):
        raise ParseError("means, scales and coefficients must be non-empty and equally long")
    if not 1 <= components <= n:
        raise ParseError(f"components {components} outside [1, {n}]")
    if not np.all(vectors["scales"] > 0):
        raise ParseError("scales must be strictly positive")
    return AestheticModel(
        category=fields["category"],
        stats=StandardizationStats(vectors["means"], vectors["scales"]),
        coefficients=vectors["coefficients"],
        intercept=intercept,
        components=components,
        layout_version=LAYOUT_VERSION,
    )
