"""
Validation of presentations and of morphisms between them.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import sympy as sp
from sympy.core.function import AppliedUndef

from src.algebra.polynomial import GradedPolynomial, weight_check
from src.algebra.symbols import BaseFunctionSymbol, MultiWeight
from src.bundles.presentation import (GradedBundlePresentation, TransitionMap,
                                      compose_maps, map_differences)
from src.errors import PresentationError


@dataclass
class Check:
  """One named pass/fail result."""

  name: str
  passed: bool
  detail: str = ""

  def to_dict(self) -> Dict[str, object]:
    return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ValidationReport:
  """Ordered list of checks plus free-form diagnostics."""

  subject: str
  checks: List[Check] = field(default_factory=list)
  diagnostics: List[str] = field(default_factory=list)

  @property
  def passed(self) -> bool:
    return all(check.passed for check in self.checks)

  def add(self, name: str, passed: bool, detail: str = "") -> Check:
    check = Check(name, bool(passed), detail)
    self.checks.append(check)
    return check

  def extend(self, other: "ValidationReport", prefix: str = "") -> None:
    for check in other.checks:
      self.checks.append(Check(prefix + check.name, check.passed, check.detail))
    self.diagnostics.extend(other.diagnostics)

  def failures(self) -> List[Check]:
    return [check for check in self.checks if not check.passed]

  def check(self, name: str) -> Check:
    for check in self.checks:
      if check.name == name:
        return check
    raise KeyError(name)


def validate(F: GradedBundlePresentation) -> ValidationReport:
  """
  Validate every transition law of a presentation.

  Args:
      F (GradedBundlePresentation): Presentation to validate

  Returns:
      ValidationReport: Homogeneity, base, tower and linear-block checks
  """
  report = ValidationReport(F.name)
  report.diagnostics.extend(F.warnings)
  weights = F.weights
  base = {c.name for c in F.base_coordinates()}

  for t in F.transitions:
    prefix = f"{t.source}->{t.target}"
    for c in F.coordinates:
      law = t.law(c.name)
      report.checks.append(_homogeneity(f"{prefix} {c.name} homogeneous", law,
                                        c.weight, weights))

      if c.kind == "base":
        stray = sorted(law.coordinates() - base)
        report.add(f"{prefix} {c.name} base law", not stray,
                   f"depends on fibre coordinates {stray}" if stray else "")
        continue

      above = sorted(n for n in law.coordinates() if not weights[n] <= c.weight)
      report.add(f"{prefix} {c.name} tower", not above,
                 f"mentions heavier coordinates {above}" if above else "")

      problem = _linear_block_problem(F, law, c.weight)
      report.add(f"{prefix} {c.name} linear block", problem is None, problem or "")
  return report


def validate_morphism(phi: TransitionMap, P: GradedBundlePresentation,
                      Q: GradedBundlePresentation,
                      target_weights: Optional[Mapping[str, MultiWeight]] = None,
                      intertwine: bool = True) -> ValidationReport:
  """
  Check that a coordinate map is a weight-preserving morphism P -> Q.

  Args:
      phi (TransitionMap): Laws keyed by Q's coordinates, in P's coordinates
      P (GradedBundlePresentation): Source presentation
      Q (GradedBundlePresentation): Target presentation
      target_weights (Mapping, optional): Weights to read Q with (flips)
      intertwine (bool): Also compare with the transition laws

  Returns:
      ValidationReport: Coverage, homogeneity and intertwining checks
  """
  report = ValidationReport(f"{phi.source}->{phi.target}")
  target_weights = target_weights or Q.weights
  missing = sorted(set(Q.names) - set(phi.laws))
  report.add("coverage", not missing, f"no law for {missing}" if missing else "")
  if missing:
    return report

  source_weights = P.weights
  for name in Q.names:
    law = phi.laws[name]
    unknown = sorted(law.coordinates() - set(source_weights))
    if unknown:
      report.add(f"{name} homogeneous", False, f"unknown coordinates {unknown}")
      continue
    report.checks.append(
      _homogeneity(f"{name} homogeneous", law, target_weights[name], source_weights))

  if intertwine:
    for diff in intertwining_differences(phi, P, Q):
      report.add("intertwining", False, diff)
    if not any(c.name == "intertwining" for c in report.checks):
      report.add("intertwining", True)
  return report


def intertwining_differences(phi: TransitionMap, P: GradedBundlePresentation,
                             Q: GradedBundlePresentation) -> List[str]:
  """
  Compare ``phi o t_P`` with ``t_Q o phi`` for every transition.

  Transitions of Q are matched by chart names, or by position when Q uses
  other chart names.
  """
  differences = []
  for position, t in enumerate(P.transitions):
    other = _matching_transition(Q, t, position, P)
    if other is None:
      continue
    left = compose_maps(t, phi)
    right = compose_maps(phi, other)
    differences.extend(
      f"{t.source}->{t.target} {diff}" for diff in map_differences(left, right))
  return differences


def _matching_transition(Q: GradedBundlePresentation, t: TransitionMap,
                         position: int, P: GradedBundlePresentation
                         ) -> Optional[TransitionMap]:
  for other in Q.transitions:
    if other.source == t.source and other.target == t.target:
      return other
  if len(Q.charts) == len(P.charts) and position < len(Q.transitions):
    return Q.transitions[position]
  return None


def _homogeneity(name: str, law: GradedPolynomial, weight: MultiWeight,
                 weights: Mapping[str, MultiWeight]) -> Check:
  problems = []
  for s in range(weight.n):
    result = weight_check(law, weights, s)
    if not result.homogeneous:
      problems.append(f"component {s}: inhomogeneous terms {result.offending}")
    elif result.degree is not None and result.degree != weight.components[s]:
      problems.append(
        f"component {s}: degree {result.degree}, expected {weight.components[s]}")
  return Check(name, not problems, "; ".join(problems))


def _linear_block_problem(F: GradedBundlePresentation, law: GradedPolynomial,
                          weight: MultiWeight) -> Optional[str]:
  same = [c for c in F.fibre_coordinates() if c.weight == weight]
  if not any(law.degree_in(c) for c in same):
    return "law has no linear part in its own weight block"
  for c in same:
    coefficient = GradedPolynomial(sp.diff(law.expr, c.symbol))
    for symbol in coefficient.functions():
      family = F.functions.get(symbol.family)
      partner = F.inverse_family(symbol.family)
      if family is None and partner is None:
        return f"undeclared tensor {symbol.family}"
      if not ((family and family.invertible) or partner):
        return f"linear coefficient {symbol} is not declared invertible"
  return None
