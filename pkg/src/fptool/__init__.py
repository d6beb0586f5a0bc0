"""Exact computations with Frobenius roots, test ideals and generic links over F_p."""

from .errors import (
    FptoolError,
    ParseError,
    PreconditionError,
    ResourceCeilingError,
    RingMismatchError,
)
from .groebner import Ideal, colon, intersect, reduced_groebner
from .ring import Polynomial, RationalParam, RingContext

__version__ = "0.1.0"

__all__ = [
    "FptoolError",
    "Ideal",
    "ParseError",
    "Polynomial",
    "PreconditionError",
    "RationalParam",
    "ResourceCeilingError",
    "RingContext",
    "RingMismatchError",
    "colon",
    "intersect",
    "reduced_groebner",
]
