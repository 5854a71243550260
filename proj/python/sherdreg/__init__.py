"""Matching and registering front/back scans of pottery sherds.

Point clouds are (N, 3) float64 arrays; rigid transforms are 4x4 matrices.
"""

from ._core import (
    SherdregError,
    bbicp,
    evaluate,
    extract_boundary,
    extract_contour,
    generate_batch,
    initial_alignment,
    match,
    read_ply,
    rigid_fit,
    run_pipeline,
    trimmed_icp,
    write_ply,
)

__all__ = [
    "SherdregError",
    "bbicp",
    "evaluate",
    "extract_boundary",
    "extract_contour",
    "generate_batch",
    "initial_alignment",
    "match",
    "read_ply",
    "rigid_fit",
    "run_pipeline",
    "trimmed_icp",
    "write_ply",
]
