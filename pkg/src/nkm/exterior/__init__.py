"""Exact exterior algebra over Q(sqrt2, sqrt3) and coframe differentials."""

from .coframe import (
    ALGEBRAS,
    CoframeAlgebra,
    coframe_d,
    flag_algebra,
    sp2_algebra,
    su2_squared_algebra,
)
from .forms import (
    EXACT,
    FLOAT,
    KForm,
    contract,
    dump_form,
    eval_form,
    hodge7,
    parse_form,
    permutation_sign,
    wedge,
)
from .scalars import SQRT2, SQRT3, SQRT6, QuadScalar, as_quad, format_quad, parse_quad

__all__ = [
    "ALGEBRAS",
    "CoframeAlgebra",
    "EXACT",
    "FLOAT",
    "KForm",
    "QuadScalar",
    "SQRT2",
    "SQRT3",
    "SQRT6",
    "as_quad",
    "coframe_d",
    "contract",
    "dump_form",
    "eval_form",
    "flag_algebra",
    "format_quad",
    "hodge7",
    "parse_form",
    "parse_quad",
    "permutation_sign",
    "sp2_algebra",
    "su2_squared_algebra",
    "wedge",
]
