"""Exact computations with coalgebras, pairings, rational parts and entwinings
over Z/m and Q."""

__version__ = "0.1.0"

from .exactscalar import GF, QQ, BaseRing
from .finmod import FinMod, ModMorphism
from .structures import Algebra, Coalgebra, Comodule, ModuleAction, Report
from .pairing import LeftPairing, eval_pairing, is_rational
from .rational import rational_part, is_rational_module
from .entwine import Entwining, EntwinedModule, representing_object, xi_functor

__all__ = [
    "GF", "QQ", "BaseRing", "FinMod", "ModMorphism",
    "Algebra", "Coalgebra", "Comodule", "ModuleAction", "Report",
    "LeftPairing", "eval_pairing", "is_rational", "rational_part", "is_rational_module",
    "Entwining", "EntwinedModule", "representing_object", "xi_functor",
]
