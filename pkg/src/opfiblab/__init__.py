"""Finite-scale laboratory for discrete opfibration classifiers over 2-algebras."""

from .fincat import CapExceeded, FinCat, FinFunctor, NatTrans, StructuralError

__all__ = ["CapExceeded", "FinCat", "FinFunctor", "NatTrans", "StructuralError"]
__version__ = "0.1.0"
