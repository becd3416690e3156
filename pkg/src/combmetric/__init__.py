"""Combinatorial metrics on F_q^n induced by coverings of [n]."""

from .covering import Covering, normalize
from .gf import FieldContext, Matrix, Vector

__all__ = ["Covering", "FieldContext", "Matrix", "Vector", "normalize"]
__version__ = "0.1.0"
