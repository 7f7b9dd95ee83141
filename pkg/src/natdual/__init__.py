"""Finite universal algebra workbench for duplication and natural dualities."""

from ._accel import backend
from .algebra import (FiniteAlgebra, Homomorphism, Signature, direct_product,
                      enumerate_homs, enumerate_subuniverses, find_isomorphism,
                      free_algebra_oracle, power, subalgebra_generate, trivial_algebra)
from .terms import App, Term, Var, eval_term

__all__ = [
    "App", "FiniteAlgebra", "Homomorphism", "Signature", "Term", "Var", "backend",
    "direct_product", "enumerate_homs", "enumerate_subuniverses", "eval_term",
    "find_isomorphism", "free_algebra_oracle", "power", "subalgebra_generate",
    "trivial_algebra",
]

__version__ = "0.1.0"
