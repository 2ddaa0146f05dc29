"""
Duals of a double vector bundle, the pairing between them and the skew form
induced by a symmetric structure.
"""
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import sympy as sp

from src.algebra.polynomial import GradedPolynomial, substitute
from src.algebra.symbols import CoordinateSymbol, MultiWeight
from src.bundles.numeric import NumericInstance, numeric_instantiate
from src.bundles.presentation import (GradedBundlePresentation, TransitionMap,
                                      block_triangular_inverse, linear_block_inverse)
from src.bundles.validation import ValidationReport
from src.errors import PairingError, PresentationError, SymmetryError
from src.symmetric.structure import SymmetricKFoldVB, dvb_blocks, sigma_coefficients

LEGS = ("A", "B")


def _leg_slot(leg: str) -> int:
  if leg not in LEGS:
    raise ValueError(f"Unknown leg '{leg}', expected A or B")
  return LEGS.index(leg)


def _dual_weight(weight: MultiWeight, slot: int) -> MultiWeight:
  w1, w2 = weight.components
  if slot == 0:
    return MultiWeight((1, 1 - w2))
  return MultiWeight((1 - w1, 1))


def fibre_matrix(t: TransitionMap, rows: Sequence[CoordinateSymbol],
                 columns: Sequence[CoordinateSymbol]) -> List[List[sp.Expr]]:
  """``M[a][b]``: coefficient of fibre coordinate a in the law of fibre coordinate b."""
  return [[sp.expand(sp.diff(t.law(c.name).expr, r.symbol)) for c in columns]
          for r in rows]


def fibre_inverse(P: GradedBundlePresentation, rows: Sequence[CoordinateSymbol],
                  matrix: Sequence[Sequence[sp.Expr]]) -> sp.Matrix:
  """
  Invert a fibre-linear transition matrix, weight block by weight block.

  Raises:
      PresentationError: If a linear block has no declared inverse
  """
  blocks: Dict[Tuple[int, ...], List[int]] = OrderedDict()
  for position, r in enumerate(rows):
    blocks.setdefault(r.weight.components, []).append(position)
  size = len(rows)
  diagonal = sp.zeros(size, size)
  for positions in blocks.values():
    sub = [[matrix[r][c] for c in positions] for r in positions]
    inverse = linear_block_inverse(P, [rows[p] for p in positions], sub)
    for i, r in enumerate(positions):
      for j, c in enumerate(positions):
        diagonal[r, c] = inverse[i][j]
  return block_triangular_inverse(sp.Matrix(matrix), list(blocks.values()), diagonal)


@dataclass
class DualDVBPresentation:
  """A dual of D over one of its sides, with dual coordinates ``p<family>``."""

  presentation: GradedBundlePresentation
  D: GradedBundlePresentation
  leg: str
  duals: Dict[str, str] = field(default_factory=dict)

  @property
  def fibre(self) -> List[CoordinateSymbol]:
    return [self.D.coordinate(name) for name in self.duals]

  @property
  def base(self) -> List[CoordinateSymbol]:
    return [c for c in self.D.coordinates if c.name not in self.duals]


def dual_dvb(D: GradedBundlePresentation, leg: str) -> DualDVBPresentation:
  """
  The dual of D seen as a vector bundle over one side.

  Leg A dualises the coordinates of first weight 1 (over the side with
  coordinates of weight (0, 1)); leg B those of second weight 1. Dual momenta
  get weight (1, 1 - w2) on leg A and (1 - w1, 1) on leg B, and transform by
  the inverse of the fibre matrix so that the evaluation pairing is invariant.

  Args:
      D (GradedBundlePresentation): Double vector bundle
      leg (str): 'A' or 'B'

  Returns:
      DualDVBPresentation: Dual presentation with the same charts

  Raises:
      PresentationError: If D is not a double vector bundle or a linear block
          has no declared inverse
  """
  slot = _leg_slot(leg)
  if D.n != 2 or any(not c.weight.is_euler() for c in D.coordinates):
    raise PresentationError("Duals are taken of double vector bundles", D.name)
  fibre = [c for c in D.coordinates if c.weight.components[slot] == 1]
  base = [c for c in D.coordinates if c.weight.components[slot] == 0]
  momenta = [CoordinateSymbol("p" + c.family, c.index, _dual_weight(c.weight, slot), c.lift)
             for c in fibre]
  duals = OrderedDict((c.name, p.name) for c, p in zip(fibre, momenta))

  transitions = []
  for t in D.transitions:
    laws = OrderedDict((c.name, t.law(c.name)) for c in base)
    inverse = fibre_inverse(D, fibre, fibre_matrix(t, fibre, fibre))
    for b, p in enumerate(momenta):
      law = sum((inverse[b, a] * momenta[a].symbol for a in range(len(momenta))),
                sp.Integer(0))
      laws[p.name] = GradedPolynomial(law)
    transitions.append(TransitionMap(t.source, t.target, laws))

  presentation = D.with_changes(name=f"{D.name}*{leg}", coordinates=tuple(base + momenta),
                                transitions=tuple(transitions))
  return DualDVBPresentation(presentation, D, leg, duals)


def pairing_invariance(dual: DualDVBPresentation, instance: NumericInstance,
                       samples: int = 20) -> ValidationReport:
  """Evaluation pairing of fibre and dual coordinates before and after every transition."""
  report = ValidationReport(f"pairing {dual.presentation.name}")
  momenta = list(dual.duals.items())
  for t in dual.D.transitions:
    lifted = dual.presentation.transition(t.source, t.target)
    failures = []
    for sample in range(samples):
      point = instance.random_point(dual.D.names, sample, "pairing")
      point.update(instance.random_point([p for _, p in momenta], sample, "momenta"))
      moved = instance.evaluate_map(t, point)
      moved_p = instance.evaluate_map(lifted, point)
      before = sum(point[p] * point[u] for u, p in momenta)
      after = sum(moved_p[p] * moved[u] for u, p in momenta)
      if before != after:
        failures.append(f"sample {sample}: {before} != {after}")
    report.add(f"{t.source}->{t.target} pairing invariant", not failures,
               failures[0] if failures else "")
  return report


@dataclass
class Covector:
  """A point of D*_A or D*_B: foot-point values and components on dualised coordinates."""

  leg: str
  footpoint: Dict[str, sp.Rational]
  components: Dict[str, sp.Rational]

  def __call__(self, d: Mapping[str, sp.Rational]) -> sp.Rational:
    for name, value in self.footpoint.items():
      if name in d and d[name] != value:
        raise PairingError(f"Point has {name} = {d[name]}, covector sits over {value}")
    try:
      return sum((value * d[name] for name, value in self.components.items()),
                 sp.Integer(0))
    except KeyError as e:
      raise PairingError(f"Point has no value for {str(e)}")


def pairing(phi: Covector, psi: Covector, d: Mapping[str, sp.Rational]) -> sp.Rational:
  """
  The pairing of D*_A and D*_B over the dual core: ``phi(d) - psi(d)``.

  Args:
      phi (Covector): Point of the leg A dual
      psi (Covector): Point of the leg B dual over the same dual core point
      d (Mapping[str, sp.Rational]): Point of D projecting to both foot-points

  Returns:
      sp.Rational: Value, independent of the choice of d

  Raises:
      PairingError: On mismatched legs, core covectors or foot-points
  """
  if phi.leg != "A" or psi.leg != "B":
    raise PairingError("Expected a leg A covector and a leg B covector")
  shared = set(phi.components) & set(psi.components)
  for name in sorted(shared):
    if phi.components[name] != psi.components[name]:
      raise PairingError(f"Covectors differ on the core coordinate {name}")
  for name in sorted(set(phi.footpoint) & set(psi.footpoint)):
    if phi.footpoint[name] != psi.footpoint[name]:
      raise PairingError(f"Covectors sit over different base points at {name}")
  return phi(d) - psi(d)


def check_pairing(D: GradedBundlePresentation, instance: NumericInstance,
                  samples: int = 20) -> ValidationReport:
  """Sample pairs of covectors and two points of D differing by a core shift."""
  first, second, core = dvb_blocks(D)
  base = D.base_coordinates()
  failures = []
  for sample in range(samples):
    values = instance.random_point(D.names, sample, "pairing-d")
    shift = instance.random_point([c.name for c in core], sample, "pairing-shift")
    momenta = instance.random_point(
      [f"{c.name}|A" for c in first] + [f"{c.name}|B" for c in second]
      + [c.name for c in core], sample, "pairing-p")
    phi = Covector(
      "A", {c.name: values[c.name] for c in base + second},
      dict([(c.name, momenta[f"{c.name}|A"]) for c in first]
           + [(c.name, momenta[c.name]) for c in core]))
    psi = Covector(
      "B", {c.name: values[c.name] for c in base + first},
      dict([(c.name, momenta[f"{c.name}|B"]) for c in second]
           + [(c.name, momenta[c.name]) for c in core]))
    shifted = dict(values)
    for c in core:
      shifted[c.name] = values[c.name] + shift[c.name]
    if pairing(phi, psi, values) != pairing(phi, psi, shifted):
      failures.append(f"sample {sample}")
  report = ValidationReport(f"pairing {D.name}")
  report.add("pairing independent of core shifts", not failures,
             failures[0] if failures else "")
  return report


@dataclass
class SkewForm:
  """
  The form ``<psi1, psi2> = psi1(sigma(d)) - psi2(d)`` on the leg B dual.

  Elements of E are written (a, q): the foot-point a on the first side and the
  components q on the second side. ``matrix[r][c]`` pairs the r-th variable
  of psi1 with the c-th variable of psi2, in the order (a..., q...).
  """

  name: str
  sides: List[str]
  seconds: List[str]
  core: List[str]
  expression: sp.Expr
  matrix: sp.Matrix
  report: ValidationReport

  def variables(self, copy: int) -> List[sp.Symbol]:
    return ([sp.Symbol(f"{name}|{copy}") for name in self.sides]
            + [sp.Symbol(f"{_momentum(name)}|{copy}") for name in self.seconds])

  def evaluate(self, instance: NumericInstance, psi1: Covector,
               psi2: Covector) -> sp.Rational:
    """Value of the form on two leg B covectors over the same dual core point."""
    point = {}
    for name in self.core:
      if psi1.components.get(name) != psi2.components.get(name):
        raise PairingError(f"Covectors differ on the core coordinate {name}")
      point[_momentum(name)] = psi1.components[name]
    for copy, psi in ((1, psi1), (2, psi2)):
      if psi.leg != "B":
        raise PairingError("The skew form lives on the leg B dual")
      for name, value in psi.footpoint.items():
        if name in self.sides:
          point[f"{name}|{copy}"] = value
        elif point.setdefault(name, value) != value:
          raise PairingError(f"Covectors sit over different base points at {name}")
      for name, value in psi.components.items():
        if name in self.seconds:
          point[f"{_momentum(name)}|{copy}"] = value
    return instance.evaluate(self.expression, point)


def _momentum(name: str) -> str:
  return "p" + name


def skew_form(S: SymmetricKFoldVB, seed: int = 0, samples: int = 20) -> SkewForm:
  """
  Build the bilinear form induced by sigma on the leg B dual over the dual core.

  The form is computed symbolically from the flip laws; the report records
  independence from the choice of d, exact skew symmetry and the rank of the
  coefficient matrix at sampled points.

  Args:
      S (SymmetricKFoldVB): Degree-2 structure in side-adapted form
      seed (int): Seed for the numeric rank check
      samples (int): Number of sample points

  Returns:
      SkewForm: Expression, coefficient matrix and report

  Raises:
      SymmetryError: If S is not of degree 2, not side adapted or moves the base
  """
  sigma_coefficients(S)
  D = S.D
  sigma = S.sigma((1, 0))
  first, second, core = dvb_blocks(D)
  for c in D.base_coordinates():
    if sigma.law(c.name) != GradedPolynomial.of(c):
      raise SymmetryError(f"Flip moves the base coordinate {c.name}", S.name)

  a = {copy: [sp.Symbol(f"{c.name}|{copy}") for c in first] for copy in (1, 2)}
  q = {copy: [sp.Symbol(f"{_momentum(c.name)}|{copy}") for c in second] for copy in (1, 2)}
  zeta = [sp.Symbol(f"{c.name}|d") for c in core]
  p = [sp.Symbol(_momentum(c.name)) for c in core]

  # d sits over a2 on the first side and a1 on the second
  d = {c.name: GradedPolynomial.of(c) for c in D.base_coordinates()}
  d.update({c.name: GradedPolynomial(a[2][i]) for i, c in enumerate(first)})
  d.update({c.name: GradedPolynomial(a[1][i]) for i, c in enumerate(second)})
  d.update({c.name: GradedPolynomial(zeta[i]) for i, c in enumerate(core)})
  flipped = {c.name: substitute(sigma.law(c.name), d, strict=True).expr
             for c in second + core}

  psi1_of_flipped = sum((q[1][b] * flipped[c.name] for b, c in enumerate(second)),
                        sp.Integer(0))
  psi1_of_flipped += sum((p[i] * flipped[c.name] for i, c in enumerate(core)), sp.Integer(0))
  psi2_of_d = sum((q[2][b] * a[1][b] for b in range(len(second))), sp.Integer(0))
  psi2_of_d += sum((p[i] * zeta[i] for i in range(len(core))), sp.Integer(0))
  expression = sp.expand(psi1_of_flipped - psi2_of_d)

  variables = {copy: a[copy] + q[copy] for copy in (1, 2)}
  matrix = sp.Matrix(len(variables[1]), len(variables[2]),
                     lambda r, c: sp.expand(sp.diff(expression, variables[1][r],
                                                    variables[2][c])))

  report = ValidationReport(f"skew form {S.name}")
  report.add("independent of d", all(sp.diff(expression, z) == 0 for z in zeta))
  swapped = expression.xreplace(dict(
    [(s1, s2) for s1, s2 in zip(variables[1], variables[2])]
    + [(s2, s1) for s1, s2 in zip(variables[1], variables[2])]))
  residue = sp.expand(expression + swapped)
  report.add("skew symmetric", residue == 0, f"<psi1,psi2> + <psi2,psi1> = {residue}")

  instance = numeric_instantiate(D, seed, extra=list(sigma.laws.values()))
  names = [c.name for c in D.base_coordinates()] + [str(s) for s in p]
  degenerate = []
  for sample in range(samples):
    point = instance.random_point(names, sample, "skew")
    values = matrix.applyfunc(lambda entry: instance.evaluate(entry, point))
    if values.rank() < matrix.shape[0]:
      degenerate.append(sample)
  report.add("non-degenerate", len(degenerate) < samples,
             f"degenerate at samples {degenerate}" if degenerate else "")

  return SkewForm(S.name, [c.name for c in first], [c.name for c in second],
                  [c.name for c in core], expression, matrix, report)


def graph_isotropy(phi: TransitionMap, S: SymmetricKFoldVB, S_prime: SymmetricKFoldVB,
                   seed: int = 0, samples: int = 20) -> ValidationReport:
  """
  Check that the dual graph of a degree-2 morphism is isotropic.

  For covectors psi1', psi2' of D' over phi's images of a1, a2, the pulled back
  covectors psi_j = psi_j' o phi must satisfy ``<psi1, psi2> = <psi1', psi2'>``.
  """
  form, form_prime = skew_form(S, seed, samples), skew_form(S_prime, seed, samples)
  first, second, core = dvb_blocks(S.D)
  first_p, second_p, core_p = dvb_blocks(S_prime.D)
  extra = list(phi.laws.values()) + list(S_prime.sigma((1, 0)).laws.values())
  instance = numeric_instantiate(S.D, seed, extra=extra + list(S.sigma((1, 0)).laws.values()))
  base = [c.name for c in S.D.base_coordinates()]
  base_p = [c.name for c in S_prime.D.base_coordinates()]
  fibre = {c.name: c.symbol for c in second + core}

  failures = []
  for sample in range(samples):
    x = instance.random_point(base, sample, "graph-x")
    shared = instance.random_point([_momentum(c.name) for c in core_p], sample, "graph-p")
    psis, psis_p = [], []
    for copy in (1, 2):
      a = instance.random_point([c.name for c in first], sample, f"graph-a{copy}")
      q_p = instance.random_point([c.name for c in second_p], sample, f"graph-q{copy}")
      known = {sp.Symbol(n): v for n, v in list(x.items()) + list(a.items())}
      image = {c.name: sp.expand(instance.instantiate(phi.law(c.name)).xreplace(known))
               for c in S_prime.D.coordinates}
      pulled = sum((q_p[c.name] * image[c.name] for c in second_p), sp.Integer(0))
      pulled += sum((shared[_momentum(c.name)] * image[c.name] for c in core_p), sp.Integer(0))
      components = {name: sp.Rational(sp.diff(pulled, symbol)) for name, symbol in fibre.items()}
      psis.append(Covector("B", dict(list(x.items()) + list(a.items())), components))
      footpoint_p = {name: sp.Rational(image[name]) for name in base_p + [c.name for c in first_p]}
      components_p = dict(q_p)
      components_p.update({c.name: shared[_momentum(c.name)] for c in core_p})
      psis_p.append(Covector("B", footpoint_p, components_p))
    left = form.evaluate(instance, psis[0], psis[1])
    right = form_prime.evaluate(instance, psis_p[0], psis_p[1])
    if left != right:
      failures.append(f"sample {sample}: {left} != {right}")

  report = ValidationReport(f"isotropy {phi.source}->{phi.target}")
  report.add("graph isotropic", not failures, failures[0] if failures else "")
  return report
