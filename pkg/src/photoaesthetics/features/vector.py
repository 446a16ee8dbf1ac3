"""Assembly of the 47-dimensional descriptor and its CSV representation."""

import csv

import numpy as np

from ..errors import ParseError
from ..imaging import check_plane, to_hsv, to_luminance
from .color import (contrast_metric, emotional_coords, hsv_means, itten_contrasts,
                    itten_histograms)
from .spatial import spectral_saliency, symmetry, thirds_saliency
from .texture import glcm, haralick

LAYOUT_VERSION = "aesthetic47-v1"
N_FEATURES = 47

# name -> slice into the vector; frozen, stored vectors depend on it
LAYOUT = {
    "contrast": slice(0, 1),
    "hsv_mean": slice(1, 4),
    "hsv_mean_inner": slice(4, 7),
    "pleasure_arousal_dominance": slice(7, 10),
    "hue_hist": slice(10, 22),
    "saturation_hist": slice(22, 27),
    "brightness_hist": slice(27, 30),
    "itten_contrast": slice(30, 33),
    "symmetry": slice(33, 34),
    "thirds": slice(34, 43),
    "haralick": slice(43, 47),
}

FEATURE_NAMES = (
    ["contrast", "mean_h", "mean_s", "mean_v", "inner_h", "inner_s", "inner_v",
     "pleasure", "arousal", "dominance"]
    + [f"hue_bin{i}" for i in range(12)]
    + [f"sat_bin{i}" for i in range(5)]
    + [f"val_bin{i}" for i in range(3)]
    + ["itten_hue", "itten_sat", "itten_val", "symmetry"]
    + [f"thirds_{r}{c}" for r in range(3) for c in range(3)]
    + ["glcm_entropy", "glcm_energy", "glcm_homogeneity", "glcm_contrast"]
)
CSV_HEADER = ["photo_id"] + [f"f{i}" for i in range(N_FEATURES)]


def extract_features(img: np.ndarray) -> np.ndarray:
    """Compute the 47-value aesthetic descriptor of an RGB plane.

    Colour and texture statistics use the decoded resolution; symmetry and
    saliency resample internally to their fixed working grids.
    """
    img = check_plane(img)
    gray = to_luminance(img)
    hsv = to_hsv(img)

    means = hsv_means(hsv)
    hists = itten_histograms(hsv)
    vec = np.concatenate([
        [contrast_metric(gray)],
        means,
        emotional_coords(means[1], means[2]),
        hists,
        itten_contrasts(hists),
        [symmetry(gray)],
        thirds_saliency(spectral_saliency(gray)),
        haralick(glcm(gray)),
    ])
    assert vec.shape == (N_FEATURES,)
    return vec


def format_row(photo_id: str, vec) -> list:
    return [photo_id] + [format(float(v), ".9g") for v in vec]


def write_features(path, rows) -> None:
    """Write ``(photo_id, vector)`` pairs sorted by photo_id."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for photo_id, vec in sorted(rows, key=lambda r: r[0]):
            writer.writerow(format_row(photo_id, vec))


def read_features(path) -> dict:
    """Load a feature CSV into an insertion-ordered ``{photo_id: vector}`` map."""
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ParseError(f"{path}: unexpected feature CSV header")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ParseError(f"{path}:{lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}")
            if row[0] in out:
                raise ParseError(f"{path}:{lineno}: duplicate photo_id {row[0]!r}")
            try:
                out[row[0]] = np.array([float(v) for v in row[1:]])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
    return out
