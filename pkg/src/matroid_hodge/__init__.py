"""Chow rings of matroids and their Hodge theory, in exact arithmetic."""

from .errors import InputError, MatroidHodgeError, VerificationError
from .matroid import Matroid, build
from .polynomial import IntPolynomial

__all__ = ["InputError", "IntPolynomial", "Matroid", "MatroidHodgeError",
           "VerificationError", "build"]
