"""Exact normal ordering in the Weyl algebra with combinatorial cross-checks."""

from .coeffs import Poly, format_coeff, q_int, q_factorial
from .errors import BoundExceeded, DeformationError, DomainError, ModeError, SeriesError
from .weyl import (
    D, Kind, Letter, NormalForm, OperatorPolynomial, X, apply_to_polynomial, constant_term,
    dual, exp_normal_order, normal_order, power_normal_order, wick_normal_order, word,
)

__version__ = "0.1.0"
