"""Gorenstein dimension and Auslander transposes over graded quotient rings."""

from .errors import DegreeError, InputError, NotInSubmodule, NotTorsionless, TheoryViolation
from .polyalg import QQ, Field, GradedFreeModule, HomogeneousMatrix, PolyRing, Polynomial

__all__ = ["QQ", "Field", "GradedFreeModule", "HomogeneousMatrix", "PolyRing", "Polynomial",
           "DegreeError", "InputError", "NotInSubmodule", "NotTorsionless", "TheoryViolation"]
