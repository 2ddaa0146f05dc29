"""
Tangent lifts of presentations and morphisms, and higher tangent bundles.
"""
import math
from collections import OrderedDict
from typing import Dict, List

import sympy as sp

from src.algebra.polynomial import GradedPolynomial
from src.algebra.symbols import CoordinateSymbol, MultiWeight
from src.bundles.presentation import GradedBundlePresentation, TransitionMap
from src.bundles.surgery import drop_component
from src.errors import FunctorError

NORMALISATIONS = ("taylor", "derivative")


def lift_map(phi: TransitionMap, P: GradedBundlePresentation,
             Q: GradedBundlePresentation) -> TransitionMap:
  """
  Tangent lift of a coordinate map P -> Q.

  Every law u' = f(u) is kept on the zero copies and gains the dotted law
  du' = sum_c (df/dc) dc, the sum running over all coordinates including the
  base ones, so base function symbols pick up formal derivatives.

  Args:
      phi (TransitionMap): Laws keyed by Q's coordinates, in P's coordinates
      P (GradedBundlePresentation): Source presentation
      Q (GradedBundlePresentation): Target presentation

  Returns:
      TransitionMap: Laws keyed by the coordinates of TQ, in those of TP
  """
  placeholders = {c.name: sp.Dummy(f"d{c.name}") for c in P.coordinates}
  renaming = {c.symbol: c.lifted(0).symbol for c in P.coordinates}
  renaming.update({placeholders[c.name]: c.lifted(1).symbol for c in P.coordinates})

  zero_laws = OrderedDict()
  dot_laws = OrderedDict()
  for c in Q.coordinates:
    law = phi.law(c.name).expr
    total = sp.Integer(0)
    for variable in sorted(law.free_symbols, key=str):
      if str(variable) in placeholders:
        total += sp.diff(law, variable) * placeholders[str(variable)]
    zero_laws[c.lifted(0).name] = GradedPolynomial(law.xreplace(renaming))
    dot_laws[c.lifted(1).name] = GradedPolynomial(total.xreplace(renaming))
  zero_laws.update(dot_laws)
  return TransitionMap(phi.source, phi.target, zero_laws)


def tangent_lift(F: GradedBundlePresentation) -> GradedBundlePresentation:
  """
  The tangent bundle TF with one extra weight field.

  Args:
      F (GradedBundlePresentation): Presentation to lift

  Returns:
      GradedBundlePresentation: Zero copies with weight (w, 0) and dotted
          coordinates with weight (w, 1)
  """
  coordinates = tuple(
    [c.lifted(0) for c in F.coordinates] + [c.lifted(1) for c in F.coordinates])
  transitions = tuple(lift_map(t, F, F) for t in F.transitions)
  return F.with_changes(name=f"T{F.name}", coordinates=coordinates,
                        transitions=transitions)


def iterated_tangent(F: GradedBundlePresentation, k: int) -> GradedBundlePresentation:
  """
  k successive tangent lifts.

  On a base manifold (all weights zero) the original weight slots carry no
  information and are dropped, leaving the k-fold vector bundle T^(k)M.
  """
  result = F
  for _ in range(k):
    result = tangent_lift(result)
  if F.degree == 0:
    for _ in range(F.n):
      result = drop_component(result, 0)
  return result.with_changes(name=f"T^({k}){F.name}")


def higher_tangent(M: GradedBundlePresentation, k: int,
                   normalisation: str = "taylor") -> GradedBundlePresentation:
  """
  The higher tangent bundle T^k M as a degree-k graded bundle.

  Coordinates ``x<A>_<a>`` of weight a are either Taylor coefficients of a curve
  (``taylor``) or its a-th derivatives (``derivative``).

  Args:
      M (GradedBundlePresentation): Base manifold presentation
      k (int): Order
      normalisation (str): 'taylor' or 'derivative'

  Returns:
      GradedBundlePresentation: T^k M

  Raises:
      FunctorError: If M has fibre coordinates or the normalisation is unknown
  """
  if normalisation not in NORMALISATIONS:
    raise FunctorError(f"Unknown normalisation '{normalisation}'", M.name)
  if M.degree != 0:
    raise FunctorError("Higher tangent bundles are built over a base manifold", M.name)

  jets: Dict[str, List[CoordinateSymbol]] = OrderedDict()
  for x in M.coordinates:
    jets[x.name] = [
      CoordinateSymbol(x.family, x.index, MultiWeight((a,)), x.lift + (a,))
      for a in range(k + 1)]
  coordinates = tuple(jets[x.name][a] for a in range(k + 1) for x in M.coordinates)

  transitions = []
  for t in M.transitions:
    laws = OrderedDict()
    for a in range(k + 1):
      for x in M.coordinates:
        laws[jets[x.name][a].name] = _jet_law(t.law(x.name).expr, jets, a, normalisation)
    transitions.append(TransitionMap(t.source, t.target, laws))
  return M.with_changes(name=f"T^{k}{M.name}", coordinates=coordinates,
                        transitions=tuple(transitions))


def _jet_law(law: sp.Expr, jets: Dict[str, List[CoordinateSymbol]], a: int,
             normalisation: str) -> GradedPolynomial:
  expr = law
  for _ in range(a):
    expr = _total_derivative(expr, jets)
  if normalisation == "taylor":
    scaling = {jet.symbol: math.factorial(b) * jet.symbol
               for chain in jets.values() for b, jet in enumerate(chain)}
    expr = expr.xreplace(scaling) / math.factorial(a)
  return GradedPolynomial(expr)


def _total_derivative(expr: sp.Expr, jets: Dict[str, List[CoordinateSymbol]]) -> sp.Expr:
  result = sp.Integer(0)
  for chain in jets.values():
    for b in range(len(chain) - 1):
      result += sp.diff(expr, chain[b].symbol) * chain[b + 1].symbol
  return result


def higher_tangent_renaming(M: GradedBundlePresentation, k: int) -> Dict[str, str]:
  """
  Identification of T T^(k-1) M with pLin(T^k M).

  Zero copies keep their name, and the dot of the (b-1)-th coefficient becomes
  the dot of the b-th one.

  Returns:
      Dict[str, str]: Coordinate names of T T^(k-1) M -> names in pLin(T^k M)
  """
  mapping = OrderedDict()
  for x in M.coordinates:
    for a in range(k):
      mapping[_jet_name(x, (a, 0))] = _jet_name(x, (a, 0))
      mapping[_jet_name(x, (a, 1))] = _jet_name(x, (a + 1, 1))
  return mapping


def _jet_name(x: CoordinateSymbol, lift) -> str:
  return CoordinateSymbol(x.family, x.index, MultiWeight((0,)), x.lift + tuple(lift)).name
