"""PPT state zoo, product-vector enumeration and extremality certificates."""

import json as _json

from . import _pptlab
from ._pptlab import (
    InputError,
    NumericalError,
    degree_sum,
    delta,
    gentiles2_complement,
    gentiles2_upb,
    is_ppt,
    kon_mnogo,
    make_family,
    partial_transpose,
)

__all__ = [
    "InputError",
    "NumericalError",
    "analyze",
    "degree_sum",
    "delta",
    "enumerate_kernel",
    "extremality",
    "gentiles2_complement",
    "gentiles2_upb",
    "is_ppt",
    "kon_mnogo",
    "make_family",
    "partial_transpose",
    "rank_profile",
]


def rank_profile(rho, m, n):
    return _json.loads(_pptlab.rank_profile(rho, m, n))


def enumerate_kernel(rho, m, n, seed=1, starts=0, threads=0):
    """Product vectors in the kernel of rho, with evidence."""
    return _json.loads(_pptlab.enumerate_kernel(rho, m, n, seed, starts, threads))


def extremality(rho, m, n, cutoff=1e-8):
    return _json.loads(_pptlab.extremality(rho, m, n, cutoff))


def analyze(rho, m, n, seed=1, starts=0, threads=0, range_search=True):
    """Full pptlab-report/1 dictionary."""
    return _json.loads(_pptlab.analyze(rho, m, n, seed, starts, threads, range_search))
