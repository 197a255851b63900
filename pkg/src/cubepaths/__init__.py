"""Certified decompositions of odd-dimensional hypercubes into equal-length paths."""

from .cube_core import Decomposition, PathEmbedding, CycleEmbedding, base_partition, f_gamma
from .decompose import build_plan, check_divisibility, decompose
from .errors import (
    CubePathsError,
    InvalidIndex,
    InvalidParameter,
    NotDivisible,
    ResourceLimit,
    Unsupported,
)
from .verify import Report, verify_decomposition, verify_dvop

__all__ = [
    "CubePathsError",
    "CycleEmbedding",
    "Decomposition",
    "InvalidIndex",
    "InvalidParameter",
    "NotDivisible",
    "PathEmbedding",
    "Report",
    "ResourceLimit",
    "Unsupported",
    "base_partition",
    "build_plan",
    "check_divisibility",
    "decompose",
    "f_gamma",
    "verify_decomposition",
    "verify_dvop",
]
