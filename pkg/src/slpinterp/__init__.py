"""Sparse interpolation of multivariate polynomials given by straight-line programs."""

from .cyclic import CyclicPoly
from .engine import (
    MetaResult,
    crt_exponent,
    meta_interpolate,
    run_interpolation,
    sparse_interpolate,
)
from .errors import InputError, InvariantError, ResourceLimitError, SlpSyntaxError
from .ff import BaseField, ExtElem, FieldTower, canonical_encode, make_tower
from .polynomial import SparsePolynomial
from .primes import ParamSet, compute_params, draw_primes, sieve_interval
from .slp import Slp, eval_in_ring, format_slp, parse_slp, probe_image, slp_from_sparse

__all__ = [
    "BaseField", "CyclicPoly", "ExtElem", "FieldTower", "InputError", "InvariantError",
    "MetaResult", "ParamSet", "ResourceLimitError", "Slp", "SlpSyntaxError",
    "SparsePolynomial", "canonical_encode", "compute_params", "crt_exponent",
    "draw_primes", "eval_in_ring", "format_slp", "make_tower", "meta_interpolate",
    "parse_slp", "probe_image", "run_interpolation", "sieve_interval",
    "slp_from_sparse", "sparse_interpolate",
]
