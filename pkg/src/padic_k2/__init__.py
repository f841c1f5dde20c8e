"""p-adic L-values of real abelian fields and the invariants read off from them."""
from .arith import kronecker, padic_valuation, fundamental_unit
from .cyclo import CycloElt, cyclo_norm
from .characters import DirichletCharacter, quadratic_character, order_p_characters, cubic_field_instances
from .bernoulli import generalized_bernoulli

__version__ = "0.1.0"

__all__ = [
    "CycloElt",
    "DirichletCharacter",
    "cubic_field_instances",
    "cyclo_norm",
    "fundamental_unit",
    "generalized_bernoulli",
    "kronecker",
    "order_p_characters",
    "padic_valuation",
    "quadratic_character",
]
