"""Janet bases, Hilbert functions and graded linear algebra over the Weyl algebra."""

__version__ = "0.1.0"

from .algebra import (Degrees, Element, Monomial, WeylAlgebra, deg, degrees, format_element, is_homogeneous,
                      multiply, ord_x0, shift_x0)
from .cones import Cone, ConeDecomposition, decompose, epsilon_coefficients, hilbert_from_cones
from .errors import AmbientMismatch, ParseError, ResourceLimitError
from .graded import (SaturationResult, dehomogenize, graded_piece, gr_generators, homogenize, homogenize_matrix,
                     saturate_x0)
from .hilbert import (HilbertData, MacaulayConstants, c_shadow, hilbert_function, hilbert_polynomial,
                      macaulay_constants)
from .janet import JanetBasis, autoreduce, complete, janet_basis, normal_form
from .linsolve import (Automorphism, ShiftedMatrix, SolutionSet, TrapezoidalForm, Unsolvable,
                       generic_automorphism, graded_kernel, rank_right, solve_system, trapezoidal_form)
from .order import AdmissibleOrder, InducedOrder, compare, hdt, induce, leading, parse_order
from .parse import ProblemFile, parse_element, parse_problem, parse_vector

__all__ = [name for name in dir() if not name.startswith("_")]
