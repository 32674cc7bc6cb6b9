"""Exact-arithmetic engine for noncommutative differential forms.

The package computes with finite-dimensional associative algebras over the
Gaussian rationals: differential forms with the operators d, b, b', kappa and
B, Fedosov products and truncated tensor algebras, the X-complex, Hodge-tower
homology (Hochschild / cyclic / de Rham / periodic), Chern character cocycles
on matrix Fredholm data, and excision exact sequences.  Everything is exact:
no floating point, no tolerances.
"""

from .scalars import Scalar
from .algebra import (
    AlgebraElement,
    BasedAlgebra,
    SplitExtension,
    WindowOverflowError,
    direct_sum,
    dual_numbers,
    laurent_window,
    make_split_extension,
    matrix_algebra,
    null_algebra,
    rationals,
    truncated_poly,
    unitize,
    upper_triangular,
    validate_algebra,
)
from .forms import FORMAL_UNIT, FormVector, b, bprime, connes_B, d, fedosov, form_mul, kappa

__all__ = [
    "AlgebraElement",
    "BasedAlgebra",
    "FORMAL_UNIT",
    "FormVector",
    "Scalar",
    "SplitExtension",
    "WindowOverflowError",
    "b",
    "bprime",
    "connes_B",
    "d",
    "direct_sum",
    "dual_numbers",
    "fedosov",
    "form_mul",
    "kappa",
    "laurent_window",
    "make_split_extension",
    "matrix_algebra",
    "null_algebra",
    "rationals",
    "truncated_poly",
    "unitize",
    "upper_triangular",
    "validate_algebra",
]
