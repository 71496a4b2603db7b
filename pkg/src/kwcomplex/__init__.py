"""Vertex-economical simplicial 2-complexes with prescribed fundamental groups.

Builders for explicit complexes, gluing with simpliciality checks, homology
and presentation certificates, closed-form complexity bounds and exhaustive
small-complex search.
"""

from kwcomplex.complex import (
    Complex2,
    ComplexError,
    SurfaceReport,
    ValidationReport,
    canonical_form,
    classify_surface,
    euler_characteristic,
    is_isomorphic,
    link,
    star,
    star_cover_nerve,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Complex2",
    "ComplexError",
    "SurfaceReport",
    "ValidationReport",
    "canonical_form",
    "classify_surface",
    "euler_characteristic",
    "is_isomorphic",
    "link",
    "star",
    "star_cover_nerve",
    "validate",
]
