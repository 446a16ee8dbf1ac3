"""Gray-level co-occurrence matrices and the four Haralick statistics we keep."""

import numpy as np

GLCM_LEVELS = 16
# (row step, column step): right, down, down-right, down-left
GLCM_OFFSETS = ((0, 1), (1, 0), (1, 1), (1, -1))


def quantize(gray: np.ndarray, levels: int = GLCM_LEVELS) -> np.ndarray:
    q = np.floor(np.asarray(gray, dtype=np.float64) * levels).astype(np.intp)
    return np.clip(q, 0, levels - 1)


def _pairs(q, dr, dc):
    h, w = q.shape
    r0, r1 = max(0, -dr), h - max(0, dr)
    c0, c1 = max(0, -dc), w - max(0, dc)
    a = q[r0:r1, c0:c1]
    b = q[r0 + dr:r1 + dr, c0 + dc:c1 + dc]
    return a.ravel(), b.ravel()


def glcm_from_levels(q: np.ndarray, levels: int = GLCM_LEVELS,
                     offsets=GLCM_OFFSETS) -> np.ndarray:
    """Symmetric, normalized co-occurrence matrix of an integer level image.

    Every offset is counted in both directions and normalized on its own;
    the per-offset matrices are then averaged. Offsets that produce no
    pixel pairs (image too narrow) are skipped.
    """
    q = np.asarray(q, dtype=np.intp)
    mats = []
    for dr, dc in offsets:
        a, b = _pairs(q, dr, dc)
        if a.size == 0:
            continue
        counts = np.bincount(a * levels + b, minlength=levels * levels)
        counts = counts.reshape(levels, levels).astype(np.float64)
        counts += counts.T
        mats.append(counts / counts.sum())
    if not mats:
        raise ValueError(f"no co-occurring pixel pairs in a {q.shape} image")
    return np.mean(mats, axis=0)


def glcm(gray: np.ndarray, levels: int = GLCM_LEVELS, offsets=GLCM_OFFSETS) -> np.ndarray:
    return glcm_from_levels(quantize(gray, levels), levels, offsets)


def haralick(p: np.ndarray) -> np.ndarray:
    """Entropy (bits), energy, homogeneity and contrast of a normalized GLCM."""
    p = np.asarray(p, dtype=np.float64)
    i, j = np.indices(p.shape)
    nz = p[p > 0]
    entropy = -np.sum(nz * np.log2(nz)) if nz.size else 0.0
    energy = np.sum(p * p)
    homogeneity = np.sum(p / (1.0 + np.abs(i - j)))
    contrast = np.sum((i - j) ** 2 * p)
    return np.array([entropy + 0.0, energy, homogeneity, contrast])
