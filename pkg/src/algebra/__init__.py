"""
Graded polynomial algebra.
Exact multigraded polynomials over a formal algebra of base function symbols.
"""
from src.algebra.symbols import (BaseFunctionSymbol, CoordinateSymbol,
                                 MultiWeight, WeightCombo)
from src.algebra.polynomial import (GradedPolynomial, WeightCheck,
                                    formal_partial, poly_arith, substitute,
                                    weight_check)

__all__ = [
  "BaseFunctionSymbol", "CoordinateSymbol", "MultiWeight", "WeightCombo",
  "GradedPolynomial", "WeightCheck", "formal_partial", "poly_arith",
  "substitute", "weight_check"
]
