from .color import (circular_hue_mean, contrast_metric, emotional_coords, hsv_means,
                    itten_contrasts, itten_histograms)
from .spatial import hog, spectral_saliency, symmetry, thirds_saliency
from .texture import glcm, glcm_from_levels, haralick, quantize
from .vector import (FEATURE_NAMES, LAYOUT, LAYOUT_VERSION, N_FEATURES, extract_features,
                     read_features, write_features)

__all__ = [
    "FEATURE_NAMES", "LAYOUT", "LAYOUT_VERSION", "N_FEATURES",
    "circular_hue_mean", "contrast_metric", "emotional_coords", "extract_features",
    "glcm", "glcm_from_levels", "haralick", "hog", "hsv_means", "itten_contrasts",
    "itten_histograms", "quantize", "read_features", "spectral_saliency", "symmetry",
    "thirds_saliency", "write_features",
]
