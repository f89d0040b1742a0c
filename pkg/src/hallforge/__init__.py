"""Exact Hall algebras of quivers with loops, their generic composition
algebras, and the symbolic positive half they are compared against."""
from .exactnum import InterpolationError, LaurentPoly, QuadScalar, RationalFn
from .generic import GenericComposition
from .hall import HallAlgebra, HallElement, TensorElement
from .quiver import A2, B_QUIVER, JORDAN, TWO_LOOP, CartanData, DimVector, Quiver, cartan, euler_form
from .repmod import BudgetExceeded, RepCatalog, RepClass
from .uq import PositiveHalf, SymElement

__all__ = [
    "A2", "B_QUIVER", "JORDAN", "TWO_LOOP",
    "BudgetExceeded", "CartanData", "DimVector", "GenericComposition", "HallAlgebra", "HallElement",
    "InterpolationError", "LaurentPoly", "PositiveHalf", "QuadScalar", "Quiver", "RationalFn",
    "RepCatalog", "RepClass", "SymElement", "TensorElement", "cartan", "euler_form",
]
__version__ = "0.1.0"
