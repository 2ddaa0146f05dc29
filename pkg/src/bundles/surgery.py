"""
Weight surgery on presentations: truncations F[X<=l], loci F[X>=0] and F[X=0].
"""
from collections import OrderedDict
from typing import Callable, Optional

from src.algebra.polynomial import GradedPolynomial, substitute
from src.algebra.symbols import MultiWeight, WeightCombo
from src.bundles.presentation import GradedBundlePresentation, TransitionMap
from src.bundles.validation import validate
from src.errors import SurgeryError


def truncate(F: GradedBundlePresentation, delta: WeightCombo, l: int,
             name: Optional[str] = None) -> GradedBundlePresentation:
  """
  Keep the coordinates of delta-weight at most l.

  Args:
      F (GradedBundlePresentation): Presentation to truncate
      delta (WeightCombo): Non-negative combination of the weight fields
      l (int): Largest delta-weight kept
      name (str, optional): Name of the result

  Returns:
      GradedBundlePresentation: The base of the fibration F -> F[delta<=l]

  Raises:
      SurgeryError: If delta has a negative coefficient or a kept law mentions
          a removed coordinate
  """
  if not delta.is_non_negative():
    raise SurgeryError(f"Truncation needs a non-negative combination, got {delta}", F.name)
  kept = [c for c in F.coordinates if delta.evaluate(c.weight) <= l]
  if len(kept) == len(F.coordinates):
    return F

  names = {c.name for c in kept}
  transitions = []
  for t in F.transitions:
    for c in kept:
      stray = sorted(t.law(c.name).coordinates() - names)
      if stray:
        raise SurgeryError(
          f"Law of '{c.name}' mentions removed coordinate '{stray[0]}'",
          f"{F.name} {t.source}->{t.target}")
    transitions.append(t.restricted(names))
  return F.with_changes(
    name=name or f"{F.name}[{delta}<={l}]", coordinates=tuple(kept),
    transitions=tuple(transitions))


def zero_negative(F: GradedBundlePresentation, X: WeightCombo,
                  name: Optional[str] = None) -> GradedBundlePresentation:
  """
  Restrict to the submanifold where every coordinate of negative X-weight vanishes.

  Args:
      F (GradedBundlePresentation): Presentation to cut
      X (WeightCombo): Integer combination of the weight fields
      name (str, optional): Name of the result

  Returns:
      GradedBundlePresentation: F[X>=0]

  Raises:
      SurgeryError: If the law of a removed coordinate does not vanish on the locus, or
          the locus is not a valid presentation
  """
  removed = [c for c in F.coordinates if X.evaluate(c.weight) < 0]
  if not removed:
    return F

  zeros = {c.name: GradedPolynomial.zero() for c in removed}
  kept = [c for c in F.coordinates if c.name not in zeros]
  transitions = []
  for t in F.transitions:
    for c in removed:
      if not substitute(t.law(c.name), zeros).is_zero():
        raise SurgeryError(
          f"Law of removed coordinate '{c.name}' does not vanish on the locus",
          f"{F.name} {t.source}->{t.target}")
    laws = OrderedDict((c.name, substitute(t.law(c.name), zeros)) for c in kept)
    transitions.append(TransitionMap(t.source, t.target, laws))
  result = F.with_changes(
    name=name or f"{F.name}[{X}>=0]", coordinates=tuple(kept),
    transitions=tuple(transitions))
  report = validate(result)
  if not report.passed:
    failure = report.failures()[0]
    raise SurgeryError(f"Locus fails '{failure.name}': {failure.detail}", result.name)
  return result


def fixed_locus(F: GradedBundlePresentation, X: WeightCombo,
                name: Optional[str] = None) -> GradedBundlePresentation:
  """F[X=0], the intersection of F[X>=0] and F[-X>=0]."""
  result = zero_negative(zero_negative(F, X), -X)
  if result is F:
    return F
  return result.with_changes(name=name or f"{F.name}[{X}=0]")


def core(D: GradedBundlePresentation, i: int = 0, j: int = 1) -> GradedBundlePresentation:
  """Core of the pair of weights (i, j): the fixed locus of Delta^i - Delta^j."""
  coefficients = [0] * D.n
  coefficients[i], coefficients[j] = 1, -1
  return fixed_locus(D, WeightCombo(tuple(coefficients)), name=f"{D.name}.core{i}{j}")


def side(D: GradedBundlePresentation, i: int) -> GradedBundlePresentation:
  """Side bundle obtained by killing weight i."""
  return truncate(D, WeightCombo.component(D.n, i), 0, name=f"{D.name}.side{i}")


def regrade(F: GradedBundlePresentation, transform: Callable[[MultiWeight], MultiWeight],
            name: Optional[str] = None) -> GradedBundlePresentation:
  """Same coordinates and laws with every weight replaced by transform(weight)."""
  coordinates = tuple(c.reweighted(transform(c.weight)) for c in F.coordinates)
  return F.with_changes(name=name or F.name, coordinates=coordinates)


def drop_component(F: GradedBundlePresentation, s: int,
                   name: Optional[str] = None) -> GradedBundlePresentation:
  """Forget weight field s."""
  return regrade(
    F, lambda w: MultiWeight(w.components[:s] + w.components[s + 1:]), name)


def projection_map(F: GradedBundlePresentation,
                   G: GradedBundlePresentation) -> TransitionMap:
  """Projection F -> G onto a truncation G of F."""
  missing = sorted(set(G.names) - set(F.names))
  if missing:
    raise SurgeryError(f"'{missing[0]}' is not a coordinate of {F.name}", G.name)
  return TransitionMap(F.name, G.name, OrderedDict(
    (c.name, GradedPolynomial.of(c)) for c in G.coordinates))


def inclusion_map(G: GradedBundlePresentation,
                  F: GradedBundlePresentation) -> TransitionMap:
  """Inclusion of a locus G into F: removed coordinates are set to zero."""
  kept = set(G.names)
  laws = OrderedDict()
  for c in F.coordinates:
    laws[c.name] = GradedPolynomial.of(c) if c.name in kept else GradedPolynomial.zero()
  return TransitionMap(G.name, F.name, laws)


def truncate_map(phi: TransitionMap, P: GradedBundlePresentation,
                 Q: GradedBundlePresentation, delta: WeightCombo,
                 l: int) -> TransitionMap:
  """
  Induced morphism between truncations of P and Q.

  Raises:
      SurgeryError: If a kept law depends on a removed source coordinate
  """
  source = {c.name for c in P.coordinates if delta.evaluate(c.weight) <= l}
  laws = OrderedDict()
  for c in Q.coordinates:
    if delta.evaluate(c.weight) > l:
      continue
    law = phi.law(c.name)
    stray = sorted(law.coordinates() - source)
    if stray:
      raise SurgeryError(f"Law of '{c.name}' mentions removed coordinate '{stray[0]}'",
                         f"{phi.source}->{phi.target}")
    laws[c.name] = law
  return TransitionMap(phi.source, phi.target, laws)


def zero_negative_map(phi: TransitionMap, P: GradedBundlePresentation,
                      Q: GradedBundlePresentation, X: WeightCombo) -> TransitionMap:
  """Restriction of a morphism P -> Q to the loci P[X>=0] -> Q[X>=0]."""
  zeros = {c.name: GradedPolynomial.zero()
           for c in P.coordinates if X.evaluate(c.weight) < 0}
  laws = OrderedDict()
  for c in Q.coordinates:
    law = substitute(phi.law(c.name), zeros)
    if X.evaluate(c.weight) < 0:
      if not law.is_zero():
        raise SurgeryError(f"Law of removed coordinate '{c.name}' does not vanish",
                           f"{phi.source}->{phi.target}")
      continue
    laws[c.name] = law
  return TransitionMap(phi.source, phi.target, laws)
