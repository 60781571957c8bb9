"""2-term complexes of finitely generated abelian groups, with butterflies as morphisms.

Everything reduces to exact integer linear algebra (Hermite/Smith normal
forms, Diophantine solving); no floating point anywhere.
"""

from .intlinalg import IntMatrix, hnf, snf, solve
from .fgab import FgAbGroup, FgAbMap
from .twocomplex import TwoTermComplex, ChainMap
from .butterfly import Butterfly, TwoMorphism

__all__ = [
    "IntMatrix", "hnf", "snf", "solve",
    "FgAbGroup", "FgAbMap",
    "TwoTermComplex", "ChainMap",
    "Butterfly", "TwoMorphism",
]
