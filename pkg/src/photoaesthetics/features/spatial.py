"""Spatial-arrangement descriptors: HOG-based left/right symmetry and
rule-of-thirds saliency."""

import numpy as np
from scipy import ndimage

from ..imaging import resize_square

HOG_BINS = 9
HOG_CELL = 16
SYMMETRY_SIDE = 256
SALIENCY_SIDE = 96
SALIENCY_SIGMA = 2.5
SALIENCY_RADIUS = 8
LOG_EPS = 1e-8


def gradients(gray: np.ndarray):
    """Centred ``[-1, 0, 1]`` differences with edge replication at the border."""
    padded = np.pad(np.asarray(gray, dtype=np.float64), 1, mode="edge")
    gx = padded[1:-1, 2:] - padded[1:-1, :-2]
    gy = padded[2:, 1:-1] - padded[:-2, 1:-1]
    return gx, gy


def hog(gray: np.ndarray, cell: int = HOG_CELL, bins: int = HOG_BINS) -> np.ndarray:
    """Histogram of oriented gradients over non-overlapping square cells.

    Orientations are unsigned over [0, 180) degrees, split into ``bins``
    equal bins whose centres sit at the middle of each bin. Each pixel votes
    its gradient magnitude into the two nearest bins by linear interpolation
    (wrapping at 180). The concatenated cell histograms (row-major cells,
    ``bins`` values each) are L2-normalized as a whole; an all-zero
    descriptor stays zero. Pixels beyond the last whole cell are ignored.
    """
    gray = np.asarray(gray, dtype=np.float64)
    gx, gy = gradients(gray)
    n_rows, n_cols = gray.shape[0] // cell, gray.shape[1] // cell
    h, w = n_rows * cell, n_cols * cell
    gx, gy = gx[:h, :w], gy[:h, :w]

    magnitude = np.hypot(gx, gy)
    angle = np.mod(np.degrees(np.arctan2(gy, gx)), 180.0)
    width = 180.0 / bins
    pos = angle / width - 0.5
    lo = np.floor(pos)
    frac = pos - lo
    lo = lo.astype(np.intp) % bins
    hi = (lo + 1) % bins

    cell_id = (np.arange(h)[:, None] // cell) * n_cols + (np.arange(w)[None, :] // cell)
    base = cell_id * bins
    size = n_rows * n_cols * bins
    desc = (np.bincount((base + lo).ravel(), (magnitude * (1.0 - frac)).ravel(), size)
            + np.bincount((base + hi).ravel(), (magnitude * frac).ravel(), size))
    norm = np.sqrt(np.dot(desc, desc))
    if norm > 0:
        desc = desc / norm
    return desc


def symmetry(gray: np.ndarray) -> float:
    """L2 distance between the HOG of the left half and of the mirrored
    right half, on a 256x256 resampling of the image."""
    sq = resize_square(gray, SYMMETRY_SIDE)
    half = SYMMETRY_SIDE // 2
    left = sq[:, :half]
    right_flipped = sq[:, half:][:, ::-1]
    diff = hog(left) - hog(right_flipped)
    return float(np.sqrt(np.dot(diff, diff)))


def spectral_saliency(gray: np.ndarray) -> np.ndarray:
    """Spectral-residual saliency on a 96x96 resampling, min-max scaled to [0, 1].

    Constant inputs produce an all-zero map.
    """
    img = resize_square(gray, SALIENCY_SIDE)
    if np.ptp(img) < 1e-12:
        return np.zeros((SALIENCY_SIDE, SALIENCY_SIDE))
    spectrum = np.fft.fft2(img)
    log_amp = np.log(np.abs(spectrum) + LOG_EPS)
    phase = np.angle(spectrum)
    residual = log_amp - ndimage.uniform_filter(log_amp, size=3, mode="nearest")
    sal = np.abs(np.fft.ifft2(np.exp(residual + 1j * phase))) ** 2
    sal = ndimage.gaussian_filter(sal, SALIENCY_SIGMA, mode="reflect",
                                  truncate=SALIENCY_RADIUS / SALIENCY_SIGMA)
    lo, hi = sal.min(), sal.max()
    if not hi > lo:
        return np.zeros_like(sal)
    return (sal - lo) / (hi - lo)


def thirds_saliency(saliency: np.ndarray) -> np.ndarray:
    """Mean saliency in each cell of the 3x3 grid, row-major (9 values)."""
    saliency = np.asarray(saliency, dtype=np.float64)
    n = saliency.shape[0] // 3
    if saliency.shape != (3 * n, 3 * n):
        raise ValueError(f"expected a square map with side divisible by 3, got {saliency.shape}")
    return saliency.reshape(3, n, 3, n).mean(axis=(1, 3)).ravel()
