"""Exact bifiltered chain complexes over F2[U, U^-1] and the sliceness
obstruction pipeline built on them: refiltering into surgered manifolds,
large-surgery quotients and correction terms, and the metabolizer / sieve
arithmetic that selects non-sliceness witnesses."""

from .algebra import (
    BifilteredComplex,
    ComplexError,
    Generator,
    ShiftTag,
    canonical_form,
    direct_sum,
    dualize,
    homology_rank,
    is_acyclic,
    isomorphic,
    reduce_complex,
    shift,
    slice_homology,
    subcomplex,
    tensor,
    validate,
    width,
)
from .models import (
    KnotExpr,
    build_model,
    parse_expr,
    split_staircase,
    torus_model,
    unknot_model,
    whitehead_double_model,
)

__all__ = [
    "BifilteredComplex",
    "ComplexError",
    "Generator",
    "ShiftTag",
    "canonical_form",
    "direct_sum",
    "dualize",
    "homology_rank",
    "is_acyclic",
    "isomorphic",
    "reduce_complex",
    "shift",
    "slice_homology",
    "subcomplex",
    "tensor",
    "validate",
    "width",
    "KnotExpr",
    "build_model",
    "parse_expr",
    "split_staircase",
    "torus_model",
    "unknot_model",
    "whitehead_double_model",
]
