"""Line-based fracture detection on long-bone radiographs."""

from ._core import (
    FEATURE_NAMES,
    FraclineError,
    bone_bounds,
    canny,
    default_config,
    detect_lines,
    edge_map,
    enhance,
    extract_features,
    infer,
    line_gradient_deg,
    optimize_min_line_length,
    pca_contribution,
    roc_auc,
    synth_xray,
    train,
)

__all__ = [
    "FEATURE_NAMES",
    "FraclineError",
    "bone_bounds",
    "canny",
    "default_config",
    "detect_lines",
    "edge_map",
    "enhance",
    "extract_features",
    "infer",
    "line_gradient_deg",
    "optimize_min_line_length",
    "pca_contribution",
    "roc_auc",
    "synth_xray",
    "train",
]
