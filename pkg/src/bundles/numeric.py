"""
Numeric instances: base function symbols replaced by random rational polynomials.

Derivative symbols are evaluated by differentiating the instantiated polynomial,
so the formal and the numeric calculus agree by construction. Declared inverse
pairs become mutually inverse constant matrices.
"""
import itertools
import random
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import sympy as sp
from sympy.core.function import AppliedUndef

from src.algebra.polynomial import GradedPolynomial
from src.algebra.symbols import BaseFunctionSymbol
from src.bundles.presentation import GradedBundlePresentation, TransitionMap
from src.errors import MissingAssignmentError, PresentationError


@dataclass
class NumericInstance:
  """Concrete rational values for every base function symbol of a presentation."""

  seed: int
  degree_cap: int
  coefficient_bound: int
  base: List[sp.Symbol]
  values: Dict[str, sp.Expr] = field(default_factory=dict)
  matrix_families: Dict[str, int] = field(default_factory=dict)

  def value(self, symbol: BaseFunctionSymbol) -> sp.Expr:
    """Polynomial in the base coordinates standing for an underived symbol."""
    label = symbol.label
    if label not in self.values:
      if symbol.family in self.matrix_families:
        raise PresentationError(
          f"Index of {label} exceeds the instantiated matrix size "
          f"{self.matrix_families[symbol.family]}")
      self.values[label] = random_polynomial(
        self.base, self.degree_cap, self.coefficient_bound,
        random.Random(f"{self.seed}:{label}"))
    return self.values[label]

  def instantiate(self, p) -> sp.Expr:
    """Replace base functions in p (a polynomial or sympy expression) by their values."""
    expr = p.expr if isinstance(p, GradedPolynomial) else sp.sympify(p)
    replacements = {}
    for applied in expr.atoms(AppliedUndef):
      replacements[applied] = self.value(BaseFunctionSymbol.from_sympy(applied))
    if not replacements:
      return expr
    return sp.expand(expr.xreplace(replacements).doit())

  def evaluate(self, p, point: Mapping[str, sp.Rational]) -> sp.Rational:
    """
    Evaluate p at a point given by coordinate values.

    Args:
        p: GradedPolynomial or sympy expression
        point (Mapping[str, sp.Rational]): Value of every coordinate by name

    Returns:
        sp.Rational: Exact value

    Raises:
        MissingAssignmentError: If p depends on a coordinate without a value
    """
    expr = self.instantiate(p)
    value = expr.xreplace({sp.Symbol(name): v for name, v in point.items()})
    if value.free_symbols:
      missing = sorted(str(s) for s in value.free_symbols)
      raise MissingAssignmentError(f"No value for coordinate '{missing[0]}'")
    return sp.Rational(value)

  def evaluate_map(self, t: TransitionMap,
                   point: Mapping[str, sp.Rational]) -> Dict[str, sp.Rational]:
    return OrderedDict((name, self.evaluate(law, point)) for name, law in t.laws.items())

  def random_point(self, names: Iterable[str], sample: int,
                   tag: str = "point") -> Dict[str, sp.Rational]:
    rng = random.Random(f"{self.seed}:{tag}:{sample}")
    return OrderedDict(
      (name, random_rational(rng, self.coefficient_bound)) for name in names)


def random_rational(rng: random.Random, bound: int) -> sp.Rational:
  return sp.Rational(rng.randint(-bound, bound), rng.randint(1, 3))


def random_polynomial(base: Sequence[sp.Symbol], degree_cap: int, bound: int,
                      rng: random.Random) -> sp.Expr:
  """Random polynomial of degree at most degree_cap with small rational coefficients."""
  expr = sp.Integer(0)
  for degree in range(degree_cap + 1):
    for monomial in itertools.combinations_with_replacement(base, degree):
      expr += random_rational(rng, bound) * sp.Mul(*monomial)
  return sp.expand(expr)


def numeric_instantiate(F: GradedBundlePresentation, seed: int, degree_cap: int = 2,
                        coefficient_bound: int = 7,
                        extra: Iterable[GradedPolynomial] = ()) -> NumericInstance:
  """
  Instantiate every base function symbol used by a presentation.

  Args:
      F (GradedBundlePresentation): Presentation to instantiate
      seed (int): Seed; every label draws from its own seeded stream
      degree_cap (int): Maximal degree of the random polynomials
      coefficient_bound (int): Bound on numerators
      extra (Iterable[GradedPolynomial]): Further polynomials whose symbols
          share the instance (morphisms, sigma laws)

  Returns:
      NumericInstance: Deterministic instance for the seed
  """
  instance = NumericInstance(seed, degree_cap, coefficient_bound, F.base_symbols())
  symbols = set()
  for t in F.transitions:
    for law in t.laws.values():
      symbols.update(_underived(law))
  for law in extra:
    symbols.update(_underived(law))

  sizes: Dict[str, int] = {}
  for symbol in symbols:
    primary = _matrix_family(F, symbol.family)
    if primary:
      sizes[primary] = max([sizes.get(primary, 0)] + list(symbol.lower + symbol.upper))

  for family, size in sorted(sizes.items()):
    matrix = random_invertible(size, coefficient_bound, random.Random(f"{seed}:{family}"))
    inverse = matrix.inv()
    partner = F.inverse_family(family)
    instance.matrix_families[family] = size
    if partner:
      instance.matrix_families[partner] = size
    for i in range(size):
      for j in range(size):
        instance.values[BaseFunctionSymbol(family, (i + 1,), (j + 1,)).label] = matrix[i, j]
        if partner:
          instance.values[BaseFunctionSymbol(partner, (i + 1,), (j + 1,)).label] = inverse[i, j]

  base = instance.base
  for name, family in sorted(F.functions.items()):
    if not family.is_base_map:
      continue
    rng = random.Random(f"{seed}:{name}")
    linear = random_invertible(len(base), coefficient_bound, rng)
    for a in range(len(base)):
      value = sum((linear[a, b] * base[b] for b in range(len(base))), sp.Integer(0))
      instance.values[BaseFunctionSymbol(name, (), (a + 1,)).label] = \
        value + random_rational(rng, coefficient_bound)
  return instance


def random_invertible(size: int, bound: int, rng: random.Random) -> sp.Matrix:
  while True:
    matrix = sp.Matrix(size, size, lambda i, j: rng.randint(-bound, bound))
    if matrix.det() != 0:
      return matrix


def check_cocycle(F: GradedBundlePresentation, instance: NumericInstance,
                  cycle: Sequence[str], samples: int = 20) -> List[str]:
  """
  Push random points around a cycle of charts and compare with the start.

  Args:
      F (GradedBundlePresentation): Presentation with transitions along the cycle
      instance (NumericInstance): Values of the base functions
      cycle (Sequence[str]): Chart names; the last chart returns to the first
      samples (int): Number of random points

  Returns:
      List[str]: Failures, empty when the cocycle condition holds at every point
  """
  steps = [F.transition(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
  failures = []
  for sample in range(samples):
    start = instance.random_point(F.names, sample, "cocycle")
    point = start
    for t in steps:
      point = instance.evaluate_map(t, point)
    moved = [name for name in F.names if point[name] != start[name]]
    if moved:
      failures.append(f"sample {sample}: {moved[0]} {start[moved[0]]} -> {point[moved[0]]}")
  return failures


def numeric_differences(P: GradedBundlePresentation, Q: GradedBundlePresentation,
                        instance: NumericInstance, samples: int = 20) -> List[str]:
  """Compare the transition laws of two presentations at random points."""
  if set(P.names) != set(Q.names):
    return [f"coordinates differ: {sorted(set(P.names) ^ set(Q.names))}"]
  failures = []
  for t in P.transitions:
    other = Q.transition(t.source, t.target)
    for sample in range(samples):
      point = instance.random_point(P.names, sample)
      left = instance.evaluate_map(t, point)
      right = instance.evaluate_map(other, point)
      wrong = [name for name in P.names if left[name] != right[name]]
      if wrong:
        failures.append(f"{t.source}->{t.target} sample {sample}: {wrong[0]}")
        break
  return failures


def _underived(law: GradedPolynomial) -> List[BaseFunctionSymbol]:
  return [BaseFunctionSymbol.from_sympy(a) for a in law.expr.atoms(AppliedUndef)]


def _matrix_family(F: GradedBundlePresentation, name: str) -> Optional[str]:
  """Family that owns the random matrix behind a declared inverse pair."""
  family = F.functions.get(name)
  if family and family.lower_arity == 1 and family.inverse:
    return name
  for candidate in F.functions.values():
    if candidate.inverse == name and candidate.lower_arity == 1:
      return candidate.name
  return None
