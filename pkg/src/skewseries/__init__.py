"""Truncated iterated skew power series rings over F_q and Z_p."""

from .coeff import CoefficientDomain
from .order import INF, compare, div_leq, in_F, iterate_below_cap, join
from .ring import (Element, PresentationError, Ring, RingPresentation, make_ring, preset,
                   validate_presentation)
from .text import ParseError, parse_element, parse_expression, print_canonical

__all__ = [
    "CoefficientDomain", "INF", "compare", "div_leq", "in_F", "iterate_below_cap", "join",
    "Element", "PresentationError", "Ring", "RingPresentation", "make_ring", "preset",
    "validate_presentation", "ParseError", "parse_element", "parse_expression", "print_canonical",
]
__version__ = "0.1.0"
