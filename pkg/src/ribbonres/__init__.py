"""Ribbon Schur functors, the complex of ribbons and minimal resolutions of Veronese modules."""

from .combinatorics import Composition, SkewShape, Tableau, ribbon_shape, skew_shape
from .errors import (
    DegenerateInputError,
    FieldRequiredError,
    InvalidCompositionError,
    NotAComplexError,
    PreconditionError,
    ResourceError,
    RibbonResError,
    UnsupportedDiagramError,
    VerificationError,
)
from .linalg import GF, QQ, ZZ, CoefficientRing, SparseMatrix

__all__ = [
    "Composition",
    "SkewShape",
    "Tableau",
    "ribbon_shape",
    "skew_shape",
    "CoefficientRing",
    "SparseMatrix",
    "QQ",
    "ZZ",
    "GF",
    "DegenerateInputError",
    "FieldRequiredError",
    "InvalidCompositionError",
    "NotAComplexError",
    "PreconditionError",
    "ResourceError",
    "RibbonResError",
    "UnsupportedDiagramError",
    "VerificationError",
]
