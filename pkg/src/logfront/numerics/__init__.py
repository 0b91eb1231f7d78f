"""Floating-point checks and visualization data for curves and log-fronts."""

from .amoeba import (
    AreaReport,
    HarnackFiberReport,
    Tracks,
    alga_sample,
    amoeba_area_estimate,
    amoeba_sample,
    cloud_residuals,
    fiber_counts,
    harnack_fiber_test,
    slice_intervals,
    track_roots,
)
from .config import DEFAULT, NumericsError, Tolerances
from .evaluate import PolyEvaluator, planar_function
from .export import cloud_csv, fmt, points_csv, svg_document, trace_csv
from .sampling import check_points, sample_off_curve, sample_on_curve, verify_logfront
from .fibers import SampleReport, fiber_solutions, tangency_residual
from .roots import aberth_batch, univariate_roots
from .trace import Cusp, TraceSet, cusp_detect, trace_real_locus

__all__ = [
    "AreaReport", "Cusp", "DEFAULT", "HarnackFiberReport", "NumericsError", "PolyEvaluator",
    "SampleReport", "Tolerances", "TraceSet", "Tracks", "aberth_batch", "alga_sample",
    "amoeba_area_estimate", "amoeba_sample", "cloud_csv", "cloud_residuals", "cusp_detect", "fiber_counts",
    "fiber_solutions", "fmt", "harnack_fiber_test", "planar_function", "points_csv",
    "slice_intervals", "svg_document", "tangency_residual", "trace_csv", "trace_real_locus",
    "track_roots", "univariate_roots", "check_points", "sample_off_curve",
    "sample_on_curve", "verify_logfront",
]
