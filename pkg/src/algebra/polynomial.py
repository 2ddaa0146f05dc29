"""
Exact graded polynomials over the formal base algebra.

A GradedPolynomial wraps an expanded sympy expression whose atoms are coordinate
symbols and applied opaque base functions (with formal derivatives). Expansion
with rational coefficients gives the canonical form, so equality of polynomials
is equality of their term maps.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple, Union

import sympy as sp
from sympy.core.function import AppliedUndef

from src.algebra.symbols import BaseFunctionSymbol, CoordinateSymbol, MultiWeight
from src.errors import MissingAssignmentError, PresentationError

TermKey = Tuple[Tuple[str, int], ...]
Coordinate = Union[str, CoordinateSymbol, sp.Symbol]


class GradedPolynomial:
  """Immutable polynomial in coordinates with exact rational coefficients."""

  __slots__ = ("_expr",)

  def __init__(self, expr=0):
    if isinstance(expr, GradedPolynomial):
      expr = expr.expr
    expr = sp.expand(sp.sympify(expr))
    if expr.has(sp.Float):
      raise PresentationError(f"Floating point coefficient in {expr}")
    self._expr = expr

  @classmethod
  def zero(cls) -> "GradedPolynomial":
    return cls(0)

  @classmethod
  def one(cls) -> "GradedPolynomial":
    return cls(1)

  @classmethod
  def of(cls, coordinate: Coordinate) -> "GradedPolynomial":
    return cls(_symbol(coordinate))

  @property
  def expr(self) -> sp.Expr:
    return self._expr

  def is_zero(self) -> bool:
    return self._expr == 0

  def monomials(self) -> List[Tuple[sp.Rational, Dict[sp.Expr, int]]]:
    """Coefficient and factor powers of every term."""
    if self.is_zero():
      return []
    result = []
    for monomial, coefficient in self._expr.as_coefficients_dict().items():
      powers = {}
      for base, exp in monomial.as_powers_dict().items():
        if base == 1:
          continue
        if not exp.is_Integer:
          raise PresentationError(f"Non-integer power {base}^{exp} in {self._expr}")
        powers[base] = int(exp)
      result.append((sp.Rational(coefficient), powers))
    return result

  @property
  def terms(self) -> Dict[TermKey, sp.Rational]:
    """Term map: canonically ordered factor powers -> rational coefficient."""
    result = {}
    for coefficient, powers in self.monomials():
      key = tuple(sorted((str(base), exp) for base, exp in powers.items()))
      result[key] = result.get(key, 0) + coefficient
    return {key: value for key, value in result.items() if value != 0}

  def coordinates(self) -> Set[str]:
    """Names of coordinates appearing as polynomial factors."""
    names = set()
    for _, powers in self.monomials():
      names.update(str(base) for base in powers if isinstance(base, sp.Symbol))
    return names

  def functions(self) -> Set[BaseFunctionSymbol]:
    found = set()
    for _, powers in self.monomials():
      for base in powers:
        if isinstance(base, (AppliedUndef, sp.Derivative)):
          found.add(BaseFunctionSymbol.from_sympy(base))
    return found

  def degree_in(self, coordinate: Coordinate) -> int:
    if self.is_zero():
      return 0
    return int(sp.degree(self._expr, _symbol(coordinate)))

  def __add__(self, other) -> "GradedPolynomial":
    return GradedPolynomial(self._expr + _expr(other))

  __radd__ = __add__

  def __sub__(self, other) -> "GradedPolynomial":
    return GradedPolynomial(self._expr - _expr(other))

  def __rsub__(self, other) -> "GradedPolynomial":
    return GradedPolynomial(_expr(other) - self._expr)

  def __mul__(self, other) -> "GradedPolynomial":
    return GradedPolynomial(self._expr * _expr(other))

  __rmul__ = __mul__

  def __neg__(self) -> "GradedPolynomial":
    return GradedPolynomial(-self._expr)

  def __pow__(self, exponent: int) -> "GradedPolynomial":
    if not isinstance(exponent, int) or exponent < 0:
      raise ValueError(f"Only non-negative integer powers, got {exponent}")
    return GradedPolynomial(self._expr**exponent)

  def __truediv__(self, other) -> "GradedPolynomial":
    divisor = sp.sympify(_expr(other))
    if not divisor.is_Rational or divisor == 0:
      raise ValueError(f"Can only divide by a non-zero rational, got {divisor}")
    return GradedPolynomial(self._expr / divisor)

  def __eq__(self, other) -> bool:
    if isinstance(other, (int, sp.Expr, GradedPolynomial)):
      return sp.expand(self._expr - _expr(other)) == 0
    return NotImplemented

  def __hash__(self) -> int:
    return hash(self._expr)

  def __str__(self) -> str:
    return str(self._expr)

  def __repr__(self) -> str:
    return f"GradedPolynomial({self._expr})"


@dataclass
class WeightCheck:
  """Outcome of a homogeneity check in one weight component."""

  homogeneous: bool
  degree: Optional[int] = None
  offending: List[str] = field(default_factory=list)


def poly_arith(a: GradedPolynomial, b: GradedPolynomial,
               op: str) -> GradedPolynomial:
  """
  Add or multiply two polynomials.

  Args:
      a (GradedPolynomial): Left operand
      b (GradedPolynomial): Right operand
      op (str): Either 'add' or 'mul'

  Returns:
      GradedPolynomial: Canonical result
  """
  if op == "add":
    return a + b
  if op == "mul":
    return a * b
  raise ValueError(f"Unknown operation '{op}'")


def formal_partial(p: GradedPolynomial, c: Coordinate) -> GradedPolynomial:
  """
  Partial derivative by a coordinate.

  Base function symbols depend on base coordinates only, so differentiating by a
  base coordinate extends their derivative multi-index and differentiating by a
  fibre coordinate kills them.

  Args:
      p (GradedPolynomial): Polynomial to differentiate
      c: Coordinate (name, CoordinateSymbol or sympy Symbol)

  Returns:
      GradedPolynomial: The derivative
  """
  return GradedPolynomial(sp.diff(p.expr, _symbol(c)))


def weight_check(p: GradedPolynomial, weights: Mapping[str, MultiWeight],
                 component: int) -> WeightCheck:
  """
  Check that every term of p has the same weight in one component.

  Args:
      p (GradedPolynomial): Polynomial to check
      weights (Mapping[str, MultiWeight]): Weight of every coordinate by name
      component (int): Weight slot to inspect

  Returns:
      WeightCheck: Homogeneous degree, or the offending terms

  Raises:
      PresentationError: If p mentions a coordinate missing from weights
  """
  degrees = []
  for coefficient, powers in p.monomials():
    degree = 0
    for base, exp in powers.items():
      if isinstance(base, sp.Symbol):
        name = str(base)
        if name not in weights:
          raise PresentationError(f"Unknown coordinate '{name}'")
        degree += weights[name].components[component] * exp
    degrees.append((degree, coefficient, powers))

  distinct = {d for d, _, _ in degrees}
  if not distinct:
    return WeightCheck(True, None)
  if len(distinct) == 1:
    return WeightCheck(True, distinct.pop())
  offending = [
    f"{_term_text(coefficient, powers)} (degree {d})"
    for d, coefficient, powers in degrees
  ]
  return WeightCheck(False, None, sorted(offending))


def substitute(p: GradedPolynomial, assignment: Mapping[Coordinate, object],
               strict: bool = False) -> GradedPolynomial:
  """
  Simultaneously replace coordinates by polynomials.

  Args:
      p (GradedPolynomial): Polynomial to substitute into
      assignment (Mapping): Coordinate -> polynomial (or sympy expression)
      strict (bool): Require every coordinate factor of p to be assigned

  Returns:
      GradedPolynomial: Canonical result

  Raises:
      MissingAssignmentError: If strict and a coordinate is not covered
  """
  mapping = {_symbol(key): _expr(value) for key, value in assignment.items()}
  if strict:
    missing = sorted(n for n in p.coordinates() if sp.Symbol(n) not in mapping)
    if missing:
      raise MissingAssignmentError(f"No assignment for coordinate '{missing[0]}'")

  inside = set()
  for applied in p.expr.atoms(AppliedUndef):
    inside.update(applied.free_symbols)
  if any(s in inside and mapping[s] != s for s in mapping):
    # base coordinates inside function arguments need chain-rule aware subs
    expr = p.expr.subs(mapping, simultaneous=True)
  else:
    expr = p.expr.xreplace(mapping)
  return GradedPolynomial(expr)


def _term_text(coefficient: sp.Rational, powers: Dict[sp.Expr, int]) -> str:
  term = sp.Integer(1)
  for base, exp in powers.items():
    term *= base**exp
  return str(coefficient * term)


def _symbol(c: Coordinate) -> sp.Symbol:
  if isinstance(c, CoordinateSymbol):
    return c.symbol
  if isinstance(c, sp.Symbol):
    return c
  return sp.Symbol(str(c))


def _expr(value) -> sp.Expr:
  if isinstance(value, GradedPolynomial):
    return value.expr
  if isinstance(value, CoordinateSymbol):
    return value.symbol
  return sp.sympify(value)
