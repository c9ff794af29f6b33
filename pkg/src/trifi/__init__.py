"""Exact verification of functional identities on triangular algebras."""

from .algebra import Algebra, Element, LinearMap, center, classify_map, condition_p, invert, mult_operator, multiply, validate_algebra
from .constraints import Binding, compile_constraints, predicted_central_pairs, predicted_generalized_space, solve_identity, verify_solution
from .dsl import parse_identity, validate_identity, standard_identity
from .linalg import Subspace, nullspace, rref, subspace_compare
from .replay import component_value, replay_theorem, vandermonde_check, verify_background_lemmas
from .triangular import Bimodule, TriangularAlgebra, build_triangular, center_by_formula, check_faithful, builtin

__all__ = [
    "Algebra", "Element", "LinearMap", "center", "classify_map", "condition_p", "invert", "mult_operator",
    "multiply", "validate_algebra", "Binding", "compile_constraints", "predicted_central_pairs",
    "predicted_generalized_space", "solve_identity", "verify_solution", "parse_identity", "validate_identity",
    "standard_identity", "Subspace", "nullspace", "rref", "subspace_compare", "component_value",
    "replay_theorem", "vandermonde_check", "verify_background_lemmas", "Bimodule", "TriangularAlgebra",
    "build_triangular", "center_by_formula", "check_faithful", "builtin",
]
