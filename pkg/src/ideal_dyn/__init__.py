"""Ideal-based recurrence on orbits of dynamical systems at finite horizons."""

from .intset import IntSet, build
from .density import estimate, estimate_all
from .ideals import exh_norm, make_submeasure, membership_verdict, parse_submeasure
from .dynsys import make_system, step_orbit
from .analysis import classify, cluster_value, estimate_c_parameter, extract_limit_subsequence, return_set

__all__ = [
    "IntSet",
    "build",
    "estimate",
    "estimate_all",
    "exh_norm",
    "make_submeasure",
    "membership_verdict",
    "parse_submeasure",
    "make_system",
    "step_orbit",
    "classify",
    "cluster_value",
    "estimate_c_parameter",
    "extract_limit_subsequence",
    "return_set",
]
