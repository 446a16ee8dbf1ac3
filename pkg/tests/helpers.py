"""Synthetic images and small file utilities shared by the tests."""

import io

import numpy as np
from PIL import Image

from photoaesthetics.imaging import hsv_to_rgb


def png_bytes(rgb, mode="RGB") -> bytes:
    arr = np.asarray(rgb)
    if arr.dtype != np.uint8:
        arr = np.clip(np.round(arr * 255), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def jpeg_bytes(rgb) -> bytes:
    arr = np.clip(np.round(np.asarray(rgb) * 255), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="JPEG", quality=90)
    return buf.getvalue()


def random_photo(rng, height=64, width=64) -> np.ndarray:
    """A cheap stand-in for a photograph: tinted gradient, coloured blobs, noise.

    Parameters are drawn so colour, brightness, texture and layout all vary
    between images.
    """
    yy, xx = np.mgrid[0:height, 0:width] / max(height, width)
    base = np.array([rng.random(), rng.uniform(0.05, 1.0), rng.uniform(0.15, 1.0)])
    angle = rng.uniform(0, 2 * np.pi)
    ramp = np.cos(angle) * xx + np.sin(angle) * yy
    hsv = np.empty((height, width, 3))
    hsv[..., 0] = (base[0] + 0.15 * rng.normal() * ramp) % 1.0
    hsv[..., 1] = np.clip(base[1] * (1 - 0.5 * rng.random() * ramp), 0, 1)
    hsv[..., 2] = np.clip(base[2] * (1 - 0.6 * rng.random() * ramp), 0, 1)
    img = hsv_to_rgb(hsv)
    for _ in range(rng.integers(0, 4)):
        cy, cx = rng.random(2)
        r = rng.uniform(0.05, 0.3)
        mask = np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * r * r))[..., None]
        colour = hsv_to_rgb(np.array([rng.random(), rng.random(), rng.random()]))
        img = img * (1 - mask) + colour * mask
    img = img + rng.uniform(0, 0.15) * rng.normal(size=img.shape)
    return np.clip(img, 0.0, 1.0)


def mirror_symmetric(rng, height, width) -> np.ndarray:
    """Random noise image whose right half mirrors its left half exactly."""
    half = rng.random((height, (width + 1) // 2, 3))
    return np.concatenate([half, half[:, : width // 2][:, ::-1]], axis=1)
