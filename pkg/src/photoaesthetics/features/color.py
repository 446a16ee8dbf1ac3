"""Colour descriptors: luminance contrast, HSV means, affective coordinates
and Itten colour histograms/contrasts."""

import numpy as np

HUE_BINS = 12
SATURATION_BINS = 5
BRIGHTNESS_BINS = 3

# (brightness, saturation) weights of each emotional coordinate
PLEASURE = (0.69, 0.22)
AROUSAL = (-0.31, 0.60)
DOMINANCE = (0.76, 0.32)


def contrast_metric(gray: np.ndarray) -> float:
    """``(Y_max - Y_min) / mean(Y)``; 0 for a (near) black image."""
    gray = np.asarray(gray, dtype=np.float64)
    mean = gray.mean()
    if mean < 1e-8:
        return 0.0
    return float((gray.max() - gray.min()) / mean)


def circular_hue_mean(hue: np.ndarray) -> float:
    """Mean direction of hues given as fractions of the full circle.

    Returns 0 when the hues cancel out (resultant length below 1e-9).
    """
    angle = 2.0 * np.pi * np.asarray(hue, dtype=np.float64).ravel()
    if angle.size == 0:
        return 0.0
    s = np.sin(angle).mean()
    c = np.cos(angle).mean()
    if np.hypot(s, c) < 1e-9:
        return 0.0
    mu = (np.arctan2(s, c) / (2.0 * np.pi)) % 1.0
    return 0.0 if mu >= 1.0 else float(mu)


def inner_region(arr: np.ndarray) -> np.ndarray:
    """Central cell of a 3x3 partition (floor boundaries)."""
    h, w = arr.shape[:2]
    return arr[h // 3: 2 * h // 3, w // 3: 2 * w // 3]


def _hsv_mean(hsv):
    return (circular_hue_mean(hsv[..., 0]),
            float(hsv[..., 1].mean()),
            float(hsv[..., 2].mean()))


def hsv_means(hsv: np.ndarray) -> np.ndarray:
    """Mean H, S, V over the whole image followed by the inner region.

    Hue is averaged on the circle; saturation and value arithmetically.
    """
    hsv = np.asarray(hsv, dtype=np.float64)
    return np.array(_hsv_mean(hsv) + _hsv_mean(inner_region(hsv)))


def emotional_coords(mean_s: float, mean_v: float):
    """Pleasure, arousal and dominance from mean saturation and brightness."""
    return tuple(wv * mean_v + ws * mean_s for wv, ws in (PLEASURE, AROUSAL, DOMINANCE))


def _frequencies(values, n_bins):
    idx = np.minimum(np.floor(values.ravel() * n_bins).astype(np.intp), n_bins - 1)
    idx = np.maximum(idx, 0)
    counts = np.bincount(idx, minlength=n_bins)
    return counts / counts.sum()


def itten_histograms(hsv: np.ndarray) -> np.ndarray:
    """Normalized 12-bin hue, 5-bin saturation and 3-bin brightness histograms,
    concatenated (20 values). Values on an upper edge fall in the last bin."""
    hsv = np.asarray(hsv, dtype=np.float64)
    return np.concatenate([
        _frequencies(hsv[..., 0], HUE_BINS),
        _frequencies(hsv[..., 1], SATURATION_BINS),
        _frequencies(hsv[..., 2], BRIGHTNESS_BINS),
    ])


def itten_contrasts(hists: np.ndarray) -> np.ndarray:
    """Population standard deviation of each of the three histograms."""
    hists = np.asarray(hists, dtype=np.float64)
    a = HUE_BINS
    b = a + SATURATION_BINS
    return np.array([hists[:a].std(), hists[a:b].std(), hists[b:].std()])
