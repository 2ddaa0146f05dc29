"""
Symmetrisation, diagonalisation and the round-trip isomorphism D ~ Lin(diag D).
"""
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy as sp

from src.algebra.polynomial import GradedPolynomial, substitute
from src.algebra.symbols import CoordinateSymbol, MultiWeight
from src.bundles.presentation import (GradedBundlePresentation, TransitionMap,
                                      compose_maps, invert_transition, map_differences)
from src.bundles.validation import ValidationReport, validate, validate_morphism
from src.errors import SymmetryError
from src.functors.flips import (Permutation, adjacent_transpositions, canonical_sigma,
                                format_permutation, inverse_permutation)
from src.functors.linearisation import full_lin_direct
from src.symmetric.structure import EXHAUSTIVE_ORDER, SymmetricKFoldVB

Eps = Tuple[int, ...]


@dataclass
class Symmetrisation:
  """Adapted coordinates z^i_eps of a symmetric structure."""

  change: TransitionMap
  blocks: Dict[Eps, List[CoordinateSymbol]]
  inverse: Optional[TransitionMap] = None

  def z(self, eps: Eps, i: int) -> GradedPolynomial:
    return self.change.law(self.blocks[eps][i].name)


def _blocks(D: GradedBundlePresentation) -> Dict[Eps, List[CoordinateSymbol]]:
  blocks: Dict[Eps, List[CoordinateSymbol]] = OrderedDict()
  key = lambda c: (c.family, c.index, c.lift[:len(c.lift) - D.n])
  for c in sorted(D.fibre_coordinates(), key=lambda c: (c.weight.components, key(c))):
    blocks.setdefault(c.weight.components, []).append(c)
  return blocks


def symmetrise(S: SymmetricKFoldVB) -> Symmetrisation:
  """
  Average the flips into an equivariant coordinate system.

  ``z^i_eps = (1/k!) sum_g sigma_g^*(y^i_{eps.g^-1})``, which satisfies
  ``sigma_h^*(z^i_eps) = z^i_{eps.h}`` for every h.

  Args:
      S (SymmetricKFoldVB): A structure passing validate_symmetric

  Returns:
      Symmetrisation: The change of coordinates y -> z and its inverse

  Raises:
      SymmetryError: If block sizes differ on an orbit, the change is not
          invertible, or equivariance fails
  """
  D, k = S.D, S.k
  blocks = _blocks(D)
  sizes: Dict[int, int] = {}
  for eps, block in blocks.items():
    total = sum(eps)
    if sizes.setdefault(total, len(block)) != len(block):
      raise SymmetryError(
        f"Weight {eps} has {len(block)} coordinates, expected {sizes[total]}", D.name)
  for eps in blocks:
    for g in S.group():
      if MultiWeight(eps).permuted(g).components not in blocks:
        raise SymmetryError(f"Weight {eps} has no partner block under {g}", D.name)

  group = S.group()
  laws = OrderedDict((c.name, GradedPolynomial.of(c)) for c in D.base_coordinates())
  for eps, block in blocks.items():
    for i, c in enumerate(block):
      total = GradedPolynomial.zero()
      for g in group:
        source = MultiWeight(eps).permuted(inverse_permutation(g)).components
        total = total + S.sigma(g).law(blocks[source][i].name)
      laws[c.name] = total / math.factorial(k)
  change = TransitionMap(D.name, D.name, laws)

  for eps, block in blocks.items():
    matrix = sp.Matrix([[sp.diff(change.law(c.name).expr, r.symbol) for c in block]
                        for r in block])
    if sp.expand(matrix.det()) == 0:
      raise SymmetryError(f"Averaged coordinates of weight {eps} are degenerate", D.name)

  for g in group:
    sigma = S.sigma(g)
    for eps, block in blocks.items():
      image = MultiWeight(eps).permuted(g).components
      for i, c in enumerate(block):
        pulled = substitute(change.law(c.name), sigma.laws)
        if pulled != change.law(blocks[image][i].name):
          raise SymmetryError(
            f"Averaged coordinate {c.name} is not equivariant under ({format_permutation(g)})",
            D.name)

  return Symmetrisation(change, blocks, invert_transition(D, change))


def _representative(blocks: Dict[Eps, List[CoordinateSymbol]], total: int) -> Eps:
  return min(eps for eps in blocks if sum(eps) == total)


def _diagonal_coordinates(D: GradedBundlePresentation,
                          blocks: Dict[Eps, List[CoordinateSymbol]]
                          ) -> Tuple[List[CoordinateSymbol], Dict[str, str]]:
  totals = sorted({sum(eps) for eps in blocks})
  seen: Dict[Tuple[str, int], set] = {}
  for c in D.base_coordinates():
    seen.setdefault(c.origin, set()).add(0)
  for w in totals:
    for c in blocks[_representative(blocks, w)]:
      seen.setdefault(c.origin, set()).add(w)

  coordinates = [CoordinateSymbol(c.family, c.index, MultiWeight((0,)), ())
                 for c in D.base_coordinates()]
  identification = {c.name: c.name for c in D.base_coordinates()}
  for w in totals:
    diagonal = []
    for c in blocks[_representative(blocks, w)]:
      lift = (w,) if len(seen[c.origin]) > 1 else ()
      diagonal.append(CoordinateSymbol(c.family, c.index, MultiWeight((w,)), lift))
    coordinates.extend(diagonal)
    for eps, block in blocks.items():
      if sum(eps) == w:
        for i, c in enumerate(block):
          identification[c.name] = diagonal[i].name
  return coordinates, identification


@dataclass
class Diagonalisation:
  """The diagonal graded bundle together with the data used to build it."""

  presentation: GradedBundlePresentation
  symmetrisation: Symmetrisation
  identification: Dict[str, str]
  adapted: GradedBundlePresentation
  report: ValidationReport = field(default_factory=lambda: ValidationReport("diagonal"))


def adapted_presentation(S: SymmetricKFoldVB,
                         symmetrisation: Symmetrisation) -> GradedBundlePresentation:
  """D with every transition conjugated into the z-coordinates."""
  zc, zinv = symmetrisation.change, symmetrisation.inverse
  transitions = tuple(
    TransitionMap(t.source, t.target, compose_maps(compose_maps(zinv, t), zc).laws)
    for t in S.D.transitions)
  return S.D.with_changes(transitions=transitions)


def diagonalise(S: SymmetricKFoldVB) -> Diagonalisation:
  """
  The graded bundle of invariant points of S, with the total weight.

  Every weight-w orbit of z-coordinates is identified with one coordinate of
  weight w, and its law is read off the lexicographically first representative.

  Raises:
      SymmetryError: If two representatives disagree after identification or
          the result is not a valid graded bundle
  """
  symmetrisation = symmetrise(S)
  adapted = adapted_presentation(S, symmetrisation)
  blocks = symmetrisation.blocks
  coordinates, identification = _diagonal_coordinates(S.D, blocks)
  rename = {name: GradedPolynomial.of(new) for name, new in identification.items()}

  transitions = []
  for t in adapted.transitions:
    laws = OrderedDict()
    for c in S.D.base_coordinates():
      laws[c.name] = substitute(t.law(c.name), rename, strict=True)
    for w in sorted({sum(eps) for eps in blocks}):
      representative = _representative(blocks, w)
      for i, c in enumerate(blocks[representative]):
        law = substitute(t.law(c.name), rename, strict=True)
        for eps, block in blocks.items():
          if sum(eps) != w:
            continue
          other = substitute(t.law(block[i].name), rename, strict=True)
          if other != law:
            raise SymmetryError(
              f"Laws of {c.name} and {block[i].name} differ on the diagonal",
              f"{S.name} {t.source}->{t.target}")
        laws[identification[c.name]] = law
    transitions.append(TransitionMap(t.source, t.target, laws))

  presentation = S.D.with_changes(
    name=f"diag({S.name})", coordinates=tuple(coordinates), transitions=tuple(transitions))
  report = validate(presentation)
  if not report.passed:
    raise SymmetryError(
      f"Diagonal is not a graded bundle: {report.failures()[0].name}", presentation.name)
  return Diagonalisation(presentation, symmetrisation, identification, adapted, report)


def factorial_map(P: GradedBundlePresentation) -> TransitionMap:
  """Coordinate of weight w in P as w! times the rescaled coordinate."""
  laws = OrderedDict(
    (c.name, GradedPolynomial.of(c) * math.factorial(c.weight.total)) for c in P.coordinates)
  return TransitionMap(P.name, P.name, laws)


def factorial_rescaling(P: GradedBundlePresentation) -> GradedBundlePresentation:
  """
  Rescale a graded bundle so that its weight-w coordinates are divided by w!.

  On the diagonal of a full linearisation this inverts the combinatorial factors
  introduced by polarisation, recovering the original bundle.
  """
  scaling = factorial_map(P)
  transitions = []
  for t in P.transitions:
    laws = OrderedDict()
    for c in P.coordinates:
      law = substitute(t.law(c.name), scaling.laws, strict=True)
      laws[c.name] = law / math.factorial(c.weight.total)
    transitions.append(TransitionMap(t.source, t.target, laws))
  return P.with_changes(name=f"{P.name}/w!", transitions=tuple(transitions))


@dataclass
class RoundTrip:
  """Isomorphism I : D -> Lin(F) for the rescaled diagonal F."""

  iso: TransitionMap
  lin: GradedBundlePresentation
  diagonal: Diagonalisation
  report: ValidationReport


def roundtrip_iso(S: SymmetricKFoldVB) -> RoundTrip:
  """
  The isomorphism D -> Lin(F) with F the factorial rescaling of diag(S).

  ``I^*(y^{i,(eps)}) = z^i_eps``; the map is checked to intertwine the
  transition laws and to carry every sigma_g to the canonical flip kappa_g.

  Raises:
      SymmetryError: If an intertwining identity fails
  """
  diagonal = diagonalise(S)
  F = factorial_rescaling(diagonal.presentation)
  lin = full_lin_direct(F)
  symmetrisation = diagonal.symmetrisation

  laws = OrderedDict()
  for c in lin.coordinates:
    if c.kind == "base":
      laws[c.name] = GradedPolynomial.of(c)
      continue
    eps = c.weight.components
    diagonal_name = CoordinateSymbol(c.family, c.index, c.weight, c.lift[:-S.k]).name
    block = {b.name for b in symmetrisation.blocks.get(eps, [])}
    d = next((name for name, new in diagonal.identification.items()
              if new == diagonal_name and name in block), None)
    if d is None:
      raise SymmetryError(f"No coordinate of weight {eps} is identified with "
                          f"'{diagonal_name}' for '{c.name}'", S.name)
    laws[c.name] = symmetrisation.change.law(d)
  iso = TransitionMap(S.D.name, lin.name, laws)

  report = ValidationReport(f"roundtrip {S.name}")
  report.extend(validate_morphism(iso, S.D, lin), prefix="I ")
  group = S.group() if S.k <= EXHAUSTIVE_ORDER else adjacent_transpositions(S.k)
  for g in group:
    kappa = canonical_sigma(lin, g)
    differences = map_differences(compose_maps(S.sigma(g), iso), compose_maps(iso, kappa))
    report.add(f"sigma/kappa ({format_permutation(g)})", not differences,
               differences[0] if differences else "")
  if not report.passed:
    raise SymmetryError(f"Round trip fails: {report.failures()[0].name}: "
                        f"{report.failures()[0].detail}", S.name)
  return RoundTrip(iso, lin, diagonal, report)


@dataclass
class MorphismSymmetry:
  """Outcome of check_morphism_symmetry."""

  report: ValidationReport
  restriction: Optional[TransitionMap] = None


def check_morphism_symmetry(phi: TransitionMap, S: SymmetricKFoldVB,
                            S_prime: SymmetricKFoldVB) -> MorphismSymmetry:
  """
  Check that a k-fold VB morphism commutes with the flips and restrict it.

  Args:
      phi (TransitionMap): Morphism D -> D', laws keyed by D' coordinates
      S (SymmetricKFoldVB): Structure on the source
      S_prime (SymmetricKFoldVB): Structure on the target

  Returns:
      MorphismSymmetry: Per-g intertwining checks, the equivalent checks in
          adapted coordinates (for k = 2 the symmetry of the quadratic
          coefficients Q_ab), and the restriction diag(S) -> diag(S')
  """
  report = ValidationReport(f"morphism {phi.source}->{phi.target}")
  report.extend(validate_morphism(phi, S.D, S_prime.D), prefix="phi ")
  group = S.group() if S.k <= EXHAUSTIVE_ORDER else adjacent_transpositions(S.k)
  for g in group:
    differences = map_differences(compose_maps(phi, S_prime.sigma(g)),
                                  compose_maps(S.sigma(g), phi))
    report.add(f"flip ({format_permutation(g)})", not differences,
               differences[0] if differences else "")

  source, target = symmetrise(S), symmetrise(S_prime)
  adapted = compose_maps(compose_maps(source.inverse, phi), target.change)
  for g in group:
    shift = _block_permutation(source.blocks, g)
    problems = []
    for eps, block in target.blocks.items():
      image = MultiWeight(eps).permuted(g).components
      for i, c in enumerate(block):
        moved = substitute(adapted.law(c.name), shift)
        if moved != adapted.law(target.blocks[image][i].name):
          problems.append(c.name)
    report.add(f"adapted flip ({format_permutation(g)})", not problems,
               f"asymmetric laws {problems}" if problems else "")

  if S.k == 2:
    _quadratic_symmetry(report, adapted, source.blocks, target.blocks)

  restriction = None
  if report.passed:
    restriction = _restrict(adapted, S, S_prime, source, target)
    report.extend(validate_morphism(restriction, diagonalise(S).presentation,
                                    diagonalise(S_prime).presentation),
                  prefix="restriction ")
  return MorphismSymmetry(report, restriction)


def _block_permutation(blocks: Dict[Eps, List[CoordinateSymbol]],
                       g: Permutation) -> Dict[str, GradedPolynomial]:
  shift = {}
  for eps, block in blocks.items():
    image = blocks[MultiWeight(eps).permuted(g).components]
    for i, c in enumerate(block):
      shift[c.name] = GradedPolynomial.of(image[i])
  return shift


def _quadratic_symmetry(report: ValidationReport, adapted: TransitionMap,
                        source: Dict[Eps, List[CoordinateSymbol]],
                        target: Dict[Eps, List[CoordinateSymbol]]) -> None:
  first, second = source.get((1, 0), []), source.get((0, 1), [])
  for c in target.get((1, 1), []):
    law = adapted.law(c.name).expr
    for a in range(len(first)):
      for b in range(a + 1, len(first)):
        q_ab = sp.expand(sp.diff(law, first[a].symbol, second[b].symbol))
        q_ba = sp.expand(sp.diff(law, first[b].symbol, second[a].symbol))
        report.add(f"Q {c.name} ({a + 1},{b + 1})", sp.expand(q_ab - q_ba) == 0,
                   f"Q_{a + 1}{b + 1} = {q_ab}, Q_{b + 1}{a + 1} = {q_ba}")
  for left, right in zip(target.get((1, 0), []), target.get((0, 1), [])):
    for a in range(len(first)):
      q = sp.expand(sp.diff(adapted.law(left.name).expr, first[a].symbol))
      r = sp.expand(sp.diff(adapted.law(right.name).expr, second[a].symbol))
      report.add(f"linear part {left.name} ({a + 1})", sp.expand(q - r) == 0,
                 f"Q = {q}, R = {r}")


def _restrict(adapted: TransitionMap, S: SymmetricKFoldVB, S_prime: SymmetricKFoldVB,
              source: Symmetrisation, target: Symmetrisation) -> TransitionMap:
  _, into_source = _diagonal_coordinates(S.D, source.blocks)
  _, into_target = _diagonal_coordinates(S_prime.D, target.blocks)
  rename = {name: GradedPolynomial.of(new) for name, new in into_source.items()}
  laws = OrderedDict()
  for c in S_prime.D.base_coordinates():
    laws[c.name] = substitute(adapted.law(c.name), rename, strict=True)
  for w in sorted({sum(eps) for eps in target.blocks}):
    for c in target.blocks[_representative(target.blocks, w)]:
      laws[into_target[c.name]] = substitute(adapted.law(c.name), rename, strict=True)
  return TransitionMap(f"diag({S.name})", f"diag({S_prime.name})", laws)
