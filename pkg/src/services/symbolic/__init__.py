"""
Graded symbolic calculus of local functionals: registry, expressions,
normal form, jet evaluation, constraints, brackets and the master equation.
"""

from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import Expression
from src.services.symbolic.parser import parse
from src.services.symbolic.service import SymbolicService

__all__ = ['Expression', 'SymbolicService', 'normalize', 'parse']
