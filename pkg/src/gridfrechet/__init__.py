"""Discrete Frechet distance under translation for planar point sequences.

The pipeline: difference points -> disk-arrangement graph -> Euler walk ->
update stream -> offline dynamic grid reachability (hierarchical block
summaries), with critical-value search on top, plus a generator/verifier
for 4-OV hardness instances.
"""

from .geometry import Curve, Point, euclidean_distance, translate_curve, difference_points
from .frechet import FreeSpaceMatrix, free_space_matrix, frechet_value, monotone_path_exists

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "FreeSpaceMatrix",
    "Point",
    "difference_points",
    "euclidean_distance",
    "frechet_value",
    "free_space_matrix",
    "monotone_path_exists",
    "translate_curve",
]
