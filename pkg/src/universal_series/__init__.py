"""Constructive universal power series with parameters.

Builds one coefficient sequence whose partial sums, along a chosen index set,
approximate a list of target functions on product compacta to certified
tolerances.
"""
__version__ = "0.1.0"

from .approx import ApproxOptions, approximate_on_product, certify, fit_polynomial
from .compacta import (ClosedDisc, FilledPolygon, ProductCompact, Segment, boundary_samples,
                       excludes_zero, monomial_sup, product_boundary_grid)
from .constructor import (ApproximationJob, ConstructionResult, ConstructionState,
                          ConstructOptions, JobRecord, build, extend_for_job, verify_job)
from .enumeration import Enumeration, MuSet, enumerate_index, index_of, mu_next
from .errors import (ApproximationFailure, ConfigError, JobFailed, JobRejected,
                     UniversalSeriesError)
from .series import CoefficientSequence, ParamPolynomial, PolyWZ, TargetFunction, partial_sum_eval
from .transforms import SequenceTransform

__all__ = [
    "ApproxOptions", "approximate_on_product", "certify", "fit_polynomial",
    "ClosedDisc", "FilledPolygon", "ProductCompact", "Segment", "boundary_samples",
    "excludes_zero", "monomial_sup", "product_boundary_grid",
    "ApproximationJob", "ConstructionResult", "ConstructionState", "ConstructOptions",
    "JobRecord", "build", "extend_for_job", "verify_job",
    "Enumeration", "MuSet", "enumerate_index", "index_of", "mu_next",
    "ApproximationFailure", "ConfigError", "JobFailed", "JobRejected", "UniversalSeriesError",
    "CoefficientSequence", "ParamPolynomial", "PolyWZ", "TargetFunction", "partial_sum_eval",
    "SequenceTransform",
]
