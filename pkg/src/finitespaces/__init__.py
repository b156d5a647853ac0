"""Exact computations on ringed finite spaces: sheaf cohomology through the
standard resolution, quasi-coherence and schematic checks, homotopy cores,
and the constructions built from them."""
from .errors import (BackendLimitation, BackendMismatch, FiniteSpaceError, ParseError, SearchBudgetExceeded,
                     ValidationError, WindowRequired)
from .poset import Preorder, build_preorder
from .space import FiniteSpace, RingedSpace, SpaceMorphism, build_morphism, build_space
from .sheafmod import SheafModule, structure_sheaf
from .verdict import Value, Verdict

__version__ = "0.1.0"

__all__ = [
    "BackendLimitation", "BackendMismatch", "FiniteSpaceError", "ParseError", "SearchBudgetExceeded",
    "ValidationError", "WindowRequired", "Preorder", "build_preorder", "FiniteSpace", "RingedSpace",
    "SpaceMorphism", "build_morphism", "build_space", "SheafModule", "structure_sheaf", "Value", "Verdict",
]
