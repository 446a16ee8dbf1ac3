"""Image decoding and the colour/geometry conversions used by the extractors.

Images travel through the package as plain float64 numpy arrays:

* RGB plane  -- shape ``(H, W, 3)``, values in [0, 1]
* gray plane -- shape ``(H, W)``, luminance in [0, 1]
* HSV plane  -- shape ``(H, W, 3)``; hue as a fraction of the circle in [0, 1)
"""

import io

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, TooSmall

MIN_SIDE = 3
SUPPORTED_FORMATS = ("JPEG", "PNG")


def check_plane(img: np.ndarray) -> np.ndarray:
    """Validate an RGB plane and return it as a float64 array."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got shape {arr.shape}")
    h, w = arr.shape[:2]
    if h < MIN_SIDE or w < MIN_SIDE:
        raise TooSmall(f"image is {w}x{h}; both sides must be >= {MIN_SIDE}")
    if not np.isfinite(arr).all() or arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("channel values must lie in [0, 1]")
    return arr


def decode(data: bytes) -> np.ndarray:
    """Decode a JPEG or PNG byte stream into an RGB plane in [0, 1].

    Alpha is discarded and palette/grayscale inputs are expanded to RGB.
    16-bit PNGs keep their full precision.

    Raises
    ------
    DecodeError
        Corrupt, truncated or unsupported input.
    TooSmall
        Either side of the decoded image is below 3 pixels.
    """
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.format not in SUPPORTED_FORMATS:
                raise DecodeError(f"unsupported image format {im.format!r}")
            w, h = im.size
            if w < MIN_SIDE or h < MIN_SIDE:
                raise TooSmall(f"image is {w}x{h}; both sides must be >= {MIN_SIDE}")
            im.load()
            if im.mode in ("I;16", "I;16B", "I;16L", "I"):
                gray = np.asarray(im, dtype=np.float64) / 65535.0
                arr = np.repeat(np.clip(gray, 0.0, 1.0)[:, :, None], 3, axis=2)
            else:
                arr = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError,
            Image.DecompressionBombError) as exc:
        raise DecodeError(str(exc) or type(exc).__name__) from exc
    return arr


def read_image(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode(fh.read())


def to_luminance(img: np.ndarray) -> np.ndarray:
    """BT.601 luma, ``0.299 R + 0.587 G + 0.114 B``."""
    img = np.asarray(img, dtype=np.float64)
    # integer weights over 1000 keep white at exactly 1.0
    y = (299.0 * img[..., 0] + 587.0 * img[..., 1] + 114.0 * img[..., 2]) / 1000.0
    return np.clip(y, 0.0, 1.0)


def to_hsv(img: np.ndarray) -> np.ndarray:
    """Standard RGB to HSV conversion with hue scaled to [0, 1).

    Achromatic pixels (saturation 0) get hue 0.
    """
    img = np.asarray(img, dtype=np.float64)
    r, g, b = img[..., 0], img[..., 1], img[..., 2]
    v = img.max(axis=-1)
    delta = v - img.min(axis=-1)
    chroma = delta > 0
    s = np.divide(delta, v, out=np.zeros_like(v), where=v > 0)

    safe = np.where(chroma, delta, 1.0)
    rc = (v - r) / safe
    gc = (v - g) / safe
    bc = (v - b) / safe
    h = np.where(r == v, bc - gc, np.where(g == v, 2.0 + rc - bc, 4.0 + gc - rc))
    h = np.where(chroma, (h / 6.0) % 1.0, 0.0)
    h[h >= 1.0] = 0.0
    return np.stack([h, s, v], axis=-1)


def hsv_to_rgb(hsv: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_hsv` (used for round-trip checks)."""
    hsv = np.asarray(hsv, dtype=np.float64)
    h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]
    i = np.floor(h * 6.0)
    f = h * 6.0 - i
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    i = i.astype(int) % 6
    choices_r = [v, q, p, p, t, v]
    choices_g = [t, v, v, q, p, p]
    choices_b = [p, p, t, v, v, q]
    r = np.choose(i, choices_r)
    g = np.choose(i, choices_g)
    b = np.choose(i, choices_b)
    return np.stack([r, g, b], axis=-1)


def _bilinear_taps(n_in: int, n_out: int):
    # half-pixel centre alignment, source coordinate clamped to the edge
    src = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    src = np.clip(src, 0.0, n_in - 1)
    lo = np.floor(src).astype(np.intp)
    hi = np.minimum(lo + 1, n_in - 1)
    frac = src - lo
    return lo, hi, frac


def resize(gray: np.ndarray, height: int, width: int) -> np.ndarray:
    """Bilinear resize with edge clamping.

    Implemented with gathers and elementwise arithmetic only, so the output
    is bit-reproducible regardless of BLAS threading.
    """
    gray = np.asarray(gray, dtype=np.float64)
    lo, hi, fy = _bilinear_taps(gray.shape[0], height)
    rows = gray[lo] * (1.0 - fy)[:, None] + gray[hi] * fy[:, None]
    lo, hi, fx = _bilinear_taps(gray.shape[1], width)
    return rows[:, lo] * (1.0 - fx) + rows[:, hi] * fx


def resize_square(gray: np.ndarray, side: int) -> np.ndarray:
    if side < MIN_SIDE:
        raise ValueError(f"side must be >= {MIN_SIDE}, got {side}")
    return resize(gray, side, side)
