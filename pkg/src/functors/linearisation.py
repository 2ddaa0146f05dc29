"""
Vertical bundles, the linearisation pLin, the embedding iota and the full
linearisation Lin in its iterated and direct forms.
"""
from collections import OrderedDict
from typing import Dict, Tuple

from src.algebra.polynomial import GradedPolynomial
from src.algebra.symbols import CoordinateSymbol, MultiWeight, WeightCombo
from src.bundles.presentation import (GradedBundlePresentation, TransitionMap,
                                      compose_maps, map_differences, rename_coordinates)
from src.bundles.surgery import (drop_component, fixed_locus, regrade, truncate,
                                 zero_negative, zero_negative_map)
from src.errors import FunctorError
from src.functors.lift import lift_map, tangent_lift


def _vertical_combo(n: int) -> WeightCombo:
  """Delta^1 - Delta^lift on a presentation with n + 1 weight fields."""
  coefficients = [0] * (n + 1)
  coefficients[0], coefficients[n] = 1, -1
  return WeightCombo(tuple(coefficients))


def _shift_first(weight: MultiWeight) -> MultiWeight:
  components = weight.components
  return MultiWeight((components[0] - components[-1],) + components[1:])


def vertical(F: GradedBundlePresentation) -> GradedBundlePresentation:
  """
  Vertical bundle VF = TF[Delta^1 - Delta^lift >= 0] with the shifted first weight.

  The dots of base coordinates are removed, and a dotted coordinate of first
  weight w gets first weight w - 1.
  """
  TF = tangent_lift(F)
  locus = zero_negative(TF, _vertical_combo(F.n))
  return regrade(locus, _shift_first, name=f"V{F.name}")


def plin(F: GradedBundlePresentation) -> GradedBundlePresentation:
  """
  Linearisation pLin(F) = VF[Delta^1 <= k - 1].

  Args:
      F (GradedBundlePresentation): Presentation of first degree k >= 1

  Returns:
      GradedBundlePresentation: GrL-bundle with one extra (Euler) weight field

  Raises:
      FunctorError: If the first degree is zero
  """
  k = F.degree_bounds[0]
  if k < 1:
    raise FunctorError("Linearisation needs first degree at least 1", F.name)
  V = vertical(F)
  return truncate(V, WeightCombo.component(V.n, 0), k - 1, name=f"pLin({F.name})")


def plin_morphism(phi: TransitionMap, P: GradedBundlePresentation,
                  Q: GradedBundlePresentation) -> TransitionMap:
  """
  Induced morphism pLin(P) -> pLin(Q).

  Args:
      phi (TransitionMap): Weight preserving morphism P -> Q
      P (GradedBundlePresentation): Source
      Q (GradedBundlePresentation): Target

  Returns:
      TransitionMap: Lifted and surgered laws keyed by pLin(Q)'s coordinates

  Raises:
      FunctorError: If a kept law leaves pLin(P)
  """
  lifted = lift_map(phi, P, Q)
  restricted = zero_negative_map(lifted, tangent_lift(P), tangent_lift(Q),
                                 _vertical_combo(P.n))
  source, target = plin(P), plin(Q)
  allowed = set(source.names)
  laws = OrderedDict()
  for c in target.coordinates:
    law = restricted.law(c.name)
    stray = sorted(law.coordinates() - allowed)
    if stray:
      raise FunctorError(f"Linearised law of '{c.name}' mentions '{stray[0]}'",
                         f"{phi.source}->{phi.target}")
    laws[c.name] = law
  return TransitionMap(source.name, target.name, laws)


def iota(F: GradedBundlePresentation) -> TransitionMap:
  """
  Weight preserving embedding F -> pLin(F).

  A dotted coordinate of an original weight-w coordinate pulls back to w times
  it; undotted coordinates pull back to themselves.

  Raises:
      FunctorError: If the embedding does not intertwine the transition laws
  """
  L = plin(F)
  laws = OrderedDict()
  for c in L.coordinates:
    original = CoordinateSymbol(c.family, c.index, c.weight, c.lift[:-1]).name
    if c.lift[-1] == 1:
      laws[c.name] = GradedPolynomial.of(original) * (c.weight.components[0] + 1)
    else:
      laws[c.name] = GradedPolynomial.of(original)
  embedding = TransitionMap(F.name, L.name, laws)

  for t in F.transitions:
    lifted = L.transition(t.source, t.target)
    differences = map_differences(compose_maps(t, embedding),
                                  compose_maps(embedding, lifted))
    if differences:
      raise FunctorError(f"iota does not intertwine: {differences[0]}",
                         f"{t.source}->{t.target}")
  return embedding


def full_lin(F: GradedBundlePresentation) -> GradedBundlePresentation:
  """Full linearisation Lin(F): pLin applied k - 1 times."""
  k = F.degree_bounds[0]
  result = F
  for _ in range(max(k - 1, 0)):
    result = plin(result)
  return result.with_changes(name=f"Lin({F.name})")


def full_lin_direct(F: GradedBundlePresentation) -> GradedBundlePresentation:
  """
  Full linearisation as the fixed locus T^(k)F[X_k = 0], X_k = Delta^0 - sum Delta^i.

  The surviving coordinates have |eps| = w, and the redundant original weight
  slot is dropped.

  Raises:
      FunctorError: If F has more than one weight field
  """
  if F.n != 1:
    raise FunctorError("The direct construction starts from a graded bundle", F.name)
  k = max(F.degree_bounds[0], 1)
  result = F
  for _ in range(k):
    result = tangent_lift(result)
  X = WeightCombo((1,) + tuple([-1] * k))
  locus = fixed_locus(result, X)
  return drop_component(locus, 0, name=f"Lin({F.name})")


def direct_renaming(Lin: GradedBundlePresentation, k: int) -> Dict[str, str]:
  """
  Fixed renaming from the iterated construction to the direct one.

  An iterated coordinate whose lift digits end with k - 1 positions of
  polarisation data is renamed by keeping the older digits and appending its
  weight eps.
  """
  mapping = OrderedDict()
  for c in Lin.coordinates:
    prefix = c.lift[:len(c.lift) - (k - 1)]
    mapping[c.name] = CoordinateSymbol(
      c.family, c.index, c.weight, prefix + c.weight.components).name
  return mapping


def lin_direct_chart(F: GradedBundlePresentation) -> Tuple[GradedBundlePresentation,
                                                           Dict[str, str]]:
  """Iterated Lin(F) renamed into the coordinates of the direct construction."""
  k = max(F.degree_bounds[0], 1)
  Lin = full_lin(F)
  mapping = direct_renaming(Lin, k)
  return rename_coordinates(Lin, mapping), mapping


def full_lin_morphism(psi: TransitionMap, P: GradedBundlePresentation,
                      Q: GradedBundlePresentation) -> TransitionMap:
  """
  Lin(psi) between the direct charts of Lin(P) and Lin(Q).

  Args:
      psi (TransitionMap): Graded bundle morphism P -> Q
      P (GradedBundlePresentation): Source, degree k
      Q (GradedBundlePresentation): Target, degree k

  Returns:
      TransitionMap: Laws keyed by the direct coordinates of Lin(Q)
  """
  k = max(P.degree_bounds[0], 1)
  if max(Q.degree_bounds[0], 1) != k:
    raise FunctorError("Lin of a morphism needs equal degrees", f"{P.name}->{Q.name}")
  phi, source, target = psi, P, Q
  for _ in range(k - 1):
    phi = plin_morphism(phi, source, target)
    source, target = plin(source), plin(target)
  renaming = dict(direct_renaming(source, k))
  renaming.update(direct_renaming(target, k))
  renamed = phi.renamed(renaming)
  return TransitionMap(f"Lin({P.name})", f"Lin({Q.name})", renamed.laws)
