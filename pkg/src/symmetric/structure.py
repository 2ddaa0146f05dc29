"""
Symmetric k-fold vector bundles: a k-fold vector bundle with flips sigma_g : D -> D^g.
"""
from collections import OrderedDict
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from src.algebra.polynomial import GradedPolynomial, substitute
from src.algebra.symbols import CoordinateSymbol
from src.bundles.presentation import (GradedBundlePresentation, TransitionMap,
                                      compose_maps, identity_map, invert_transition,
                                      map_differences)
from src.bundles.validation import ValidationReport, validate, validate_morphism
from src.errors import SymmetryError
from src.functors.flips import (Permutation, adjacent_transpositions, all_permutations,
                                canonical_sigma, compose_permutations, flip,
                                format_permutation, identity_permutation, transposition)

EXHAUSTIVE_ORDER = 4


class SymmetricKFoldVB:
  """
  A k-fold vector bundle presentation with its family of flips.

  Only the adjacent transpositions are stored; sigma(g) for other g is built
  from a reduced word and cached.
  """

  def __init__(self, D: GradedBundlePresentation,
               generators: Mapping[Sequence[int], TransitionMap]):
    self.D = D
    self.k = D.n
    self.generators: Dict[Permutation, TransitionMap] = {
      tuple(g): sigma for g, sigma in generators.items()}
    for s in adjacent_transpositions(self.k):
      if s not in self.generators:
        raise SymmetryError(f"Missing flip for generator ({format_permutation(s)})", D.name)
    self._cache: Dict[Permutation, TransitionMap] = dict(self.generators)
    identity = identity_permutation(self.k)
    self._cache[identity] = identity_map(D.coordinates, D.name)

  @classmethod
  def canonical(cls, Lin: GradedBundlePresentation) -> "SymmetricKFoldVB":
    """Canonical flips of a full linearisation in its direct chart."""
    return cls(Lin, {s: canonical_sigma(Lin, s) for s in adjacent_transpositions(Lin.n)})

  @property
  def name(self) -> str:
    return self.D.name

  def sigma(self, g: Sequence[int]) -> TransitionMap:
    """
    The flip sigma_g, composed from generators through sigma_(h s) = sigma_h o sigma_s.

    Args:
        g (Sequence[int]): Permutation of the k weight fields

    Returns:
        TransitionMap: Laws keyed by D^g's coordinates
    """
    g = tuple(g)
    if g in self._cache:
      return self._cache[g]
    descent = next(i for i in range(self.k - 1) if g[i] > g[i + 1])
    s = transposition(self.k, descent, descent + 1)
    h = compose_permutations(g, s)
    composite = compose_maps(self.sigma(s), self.sigma(h))
    result = TransitionMap(self.D.name, f"{self.D.name}^({format_permutation(g)})",
                           composite.laws)
    self._cache[g] = result
    return result

  def transformed(self, zeta: TransitionMap, name: Optional[str] = None
                  ) -> "SymmetricKFoldVB":
    """
    Conjugate the presentation and every flip by a coordinate change zeta of D.

    Args:
        zeta (TransitionMap): New coordinates as polynomials in the old ones
        name (str, optional): Name of the new presentation

    Returns:
        SymmetricKFoldVB: Same structure read in the new chart
    """
    inverse = invert_transition(self.D, zeta)
    conjugate = lambda t: compose_maps(compose_maps(inverse, t), zeta)
    transitions = tuple(
      TransitionMap(t.source, t.target, conjugate(t).laws) for t in self.D.transitions)
    D = self.D.with_changes(name=name or self.D.name, transitions=transitions)
    generators = {
      g: TransitionMap(D.name, sigma.target, conjugate(sigma).laws)
      for g, sigma in self.generators.items()}
    return SymmetricKFoldVB(D, generators)

  def group(self) -> List[Permutation]:
    return all_permutations(self.k)


def dvb_blocks(D: GradedBundlePresentation) -> Tuple[List[CoordinateSymbol], ...]:
  """Side and core fibre coordinates of a double vector bundle, ordered by (family, index)."""
  if D.n != 2:
    raise SymmetryError("Expected a double vector bundle", D.name)
  key = lambda c: (c.family, c.index, c.lift)
  first = sorted((c for c in D.coordinates if c.weight.components == (1, 0)), key=key)
  second = sorted((c for c in D.coordinates if c.weight.components == (0, 1)), key=key)
  core = sorted((c for c in D.coordinates if c.weight.components == (1, 1)), key=key)
  return first, second, core


def sigma_coefficients(S: SymmetricKFoldVB) -> Dict[str, Dict[Tuple[int, int], sp.Expr]]:
  """
  Read sigma^i_ab off a degree-2 structure in side-adapted form.

  Side-adapted means sigma swaps the two sides position by position; then
  sigma^* z^i - z^i is bilinear and sigma^i_ab is the coefficient of
  y10_b * y01_a (positions 1-based).

  Returns:
      Dict[str, Dict[Tuple[int, int], sp.Expr]]: Core coordinate -> (a, b) -> coefficient

  Raises:
      SymmetryError: If the structure is not of degree 2 or not side adapted
  """
  if S.k != 2:
    raise SymmetryError("sigma coefficients are defined for k = 2", S.name)
  first, second, core = dvb_blocks(S.D)
  sigma = S.sigma((1, 0))
  if len(first) != len(second):
    raise SymmetryError("Sides of different rank", S.name)
  for a, b in zip(first, second):
    if sigma.law(b.name) != GradedPolynomial.of(a) or sigma.law(a.name) != GradedPolynomial.of(b):
      raise SymmetryError(f"Flip is not side adapted at '{a.name}'", S.name)

  coefficients = OrderedDict()
  for z in core:
    rest = sigma.law(z.name) - GradedPolynomial.of(z)
    table = OrderedDict()
    bilinear = sp.Integer(0)
    for a, y01 in enumerate(second, start=1):
      for b, y10 in enumerate(first, start=1):
        value = sp.expand(sp.diff(rest.expr, y10.symbol, y01.symbol))
        table[(a, b)] = value
        bilinear += value * y10.symbol * y01.symbol
    if not (rest - bilinear).is_zero():
      raise SymmetryError(f"Flip of '{z.name}' is not bilinear in the sides", S.name)
    coefficients[z.name] = table
  return coefficients


def validate_symmetric(S: SymmetricKFoldVB) -> ValidationReport:
  """
  Check the axioms of a symmetric k-fold vector bundle.

  Args:
      S (SymmetricKFoldVB): Structure to check

  Returns:
      ValidationReport: Euler weights, flip morphisms, composition law, core
          conditions and, for k = 2, skewness of sigma^i_ab
  """
  D, k = S.D, S.k
  report = ValidationReport(f"symmetric {D.name}")
  report.extend(validate(D), prefix="D ")

  heavy = sorted(c.name for c in D.coordinates if not c.weight.is_euler())
  report.add("euler weights", not heavy, f"non-Euler weights on {heavy}" if heavy else "")

  for s, sigma in sorted(S.generators.items()):
    label = f"sigma({format_permutation(s)}) "
    report.extend(validate_morphism(sigma, D, D, target_weights=flip(D, s).weights),
                  prefix=label)

  if k <= EXHAUSTIVE_ORDER:
    pairs = [(g1, g2) for g1 in S.group() for g2 in S.group()]
  else:
    generators = adjacent_transpositions(k)
    pairs = [(s, t) for s in generators for t in generators]
  for g1, g2 in pairs:
    expected = S.sigma(compose_permutations(g1, g2))
    composite = compose_maps(S.sigma(g2), S.sigma(g1))
    differences = map_differences(composite, expected)
    report.add(f"composition ({format_permutation(g1)})({format_permutation(g2)})",
               not differences, differences[0] if differences else "")

  for i in range(k):
    for j in range(i + 1, k):
      detail = _core_problem(S, i, j)
      report.add(f"core ({i + 1},{j + 1})", detail is None, detail or "")

  if k == 2:
    try:
      coefficients = sigma_coefficients(S)
    except SymmetryError as e:
      report.add("skew sigma", False, f"Cannot read sigma coefficients: {str(e)}")
    else:
      asymmetric = [
        f"{z}: sigma_{a}{b} = {table[(a, b)]}, sigma_{b}{a} = {table[(b, a)]}"
        for z, table in coefficients.items() for (a, b) in table
        if a <= b and sp.expand(table[(a, b)] + table[(b, a)]) != 0]
      report.add("skew sigma", not asymmetric, "; ".join(asymmetric))
  return report


def _core_problem(S: SymmetricKFoldVB, i: int, j: int) -> Optional[str]:
  sigma = S.sigma(transposition(S.k, i, j))
  on_core = lambda c: c.weight.components[i] == c.weight.components[j]
  zeros = {c.name: GradedPolynomial.zero() for c in S.D.coordinates if not on_core(c)}
  for c in S.D.coordinates:
    if on_core(c):
      restricted = substitute(sigma.law(c.name), zeros)
      if restricted != GradedPolynomial.of(c):
        return f"{c.name} -> {restricted}"
  return None
