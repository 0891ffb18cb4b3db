"""Twisted tensor products of coalgebras and algebras with exact arithmetic."""

from .algtwist import AlgTwist, TwistedAlgebra, dualize, twisted_algebra
from .cotwist import Twist, TwistedCoalgebra, check_octagon, conormalize, solve_counit, twisted_coalgebra
from .functionals import Functional, conv_inverse, conv_mul, star_inverse, star_mul
from .linalg import Field, LinMap, TensorSpace, compose, tensor
from .report import Check, Report
from .structures import Algebra, Bialgebra, Coalgebra, HopfAlgebra
from .tw import F, F_inv, TwTwist

__all__ = [
    "AlgTwist",
    "Algebra",
    "Bialgebra",
    "Check",
    "Coalgebra",
    "F",
    "F_inv",
    "Field",
    "Functional",
    "HopfAlgebra",
    "LinMap",
    "Report",
    "TensorSpace",
    "TwTwist",
    "Twist",
    "TwistedAlgebra",
    "TwistedCoalgebra",
    "check_octagon",
    "compose",
    "conormalize",
    "conv_inverse",
    "conv_mul",
    "dualize",
    "solve_counit",
    "star_inverse",
    "star_mul",
    "tensor",
    "twisted_algebra",
    "twisted_coalgebra",
]
