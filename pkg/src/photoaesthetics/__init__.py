"""Compositional aesthetic features, per-category PLSR beauty models and
surfacing of beautiful low-popularity photos."""

from .features import LAYOUT_VERSION, N_FEATURES, extract_features
from .imaging import decode

__version__ = "0.1.0"

__all__ = ["LAYOUT_VERSION", "N_FEATURES", "decode", "extract_features"]
