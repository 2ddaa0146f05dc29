"""
Z2^k-superisation of k-fold vector bundles.

A coordinate of multi-weight eps becomes a Z2^k-graded variable of degree eps;
two variables commute up to ``(-1)^<eps, delta>``. The laws are re-read verbatim
when no monomial ever contains two variables that do not strictly commute.
"""
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import sympy as sp

from src.algebra.symbols import MultiWeight
from src.bundles.presentation import GradedBundlePresentation
from src.bundles.validation import ValidationReport
from src.errors import SuperisationError


@dataclass(frozen=True)
class Z2kDegree:
  """An element of Z2^k."""

  bits: Tuple[int, ...]

  @classmethod
  def of(cls, weight: MultiWeight) -> "Z2kDegree":
    return cls(tuple(w % 2 for w in weight.components))

  @property
  def parity(self) -> int:
    return sum(self.bits) % 2

  def dot(self, other: "Z2kDegree") -> int:
    """Standard scalar product mod 2."""
    return sum(a * b for a, b in zip(self.bits, other.bits)) % 2

  def sign(self, other: "Z2kDegree") -> int:
    return -1 if self.dot(other) else 1

  def __str__(self) -> str:
    return "(" + ",".join(str(b) for b in self.bits) + ")"


@dataclass
class SignViolation:
  """Two coordinates that do not strictly commute but share a monomial."""

  law: str
  monomial: str
  pair: Tuple[str, str]

  def __str__(self) -> str:
    return f"{self.law}: {self.monomial} pairs {self.pair[0]} and {self.pair[1]}"


def _degrees(D: GradedBundlePresentation) -> Dict[str, Z2kDegree]:
  for c in D.coordinates:
    if not c.weight.is_euler():
      raise SuperisationError(f"Coordinate {c.name} has weight {c.weight} outside {{0,1}}^k")
  return OrderedDict((c.name, Z2kDegree.of(c.weight)) for c in D.coordinates)


def sign_violations(D: GradedBundlePresentation) -> List[SignViolation]:
  """Every (law, monomial, pair) where two fibre factors have odd scalar product."""
  degrees = _degrees(D)
  found = []
  for t in D.transitions:
    for name, law in t.laws.items():
      for coefficient, powers in law.monomials():
        factors = sorted(str(b) for b in powers
                         if isinstance(b, sp.Symbol) and str(b) in degrees
                         and any(degrees[str(b)].bits))
        monomial = str(coefficient * sp.Mul(*[b**e for b, e in powers.items()]))
        for i, left in enumerate(factors):
          for right in factors[i + 1:]:
            if degrees[left].dot(degrees[right]):
              found.append(SignViolation(f"{t.source}->{t.target} {name}", monomial,
                                         (left, right)))
  return found


def z2k_sign_check(D: GradedBundlePresentation) -> ValidationReport:
  """
  Check that the laws never multiply coordinates that fail to commute.

  Args:
      D (GradedBundlePresentation): k-fold vector bundle

  Returns:
      ValidationReport: One check per transition, naming the offending pairs

  Raises:
      SuperisationError: If a weight lies outside {0,1}^k
  """
  violations = sign_violations(D)
  report = ValidationReport(f"sign rule {D.name}")
  if not D.transitions:
    report.add("sign rule", True, "no transitions")
  for t in D.transitions:
    prefix = f"{t.source}->{t.target}"
    mine = [v for v in violations if v.law.startswith(prefix + " ")]
    report.add(f"{prefix} sign rule", not mine, "; ".join(str(v) for v in mine))
  return report


@dataclass
class Z2kPresentation:
  """The laws of D re-read over Z2^k-graded coordinates."""

  presentation: GradedBundlePresentation
  degrees: Dict[str, Z2kDegree]
  table: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = field(default_factory=dict)

  @property
  def parities(self) -> Dict[str, int]:
    return OrderedDict((name, d.parity) for name, d in self.degrees.items())

  def odd(self) -> List[str]:
    return [name for name, d in self.degrees.items() if d.parity]

  def to_dict(self) -> Dict[str, object]:
    return {
      "degrees": {name: str(d) for name, d in self.degrees.items()},
      "parities": self.parities,
      "table": [{"left": str(Z2kDegree(a)), "right": str(Z2kDegree(b)), "sign": s}
                for (a, b), s in self.table.items()],
    }


def superise(D: GradedBundlePresentation) -> Z2kPresentation:
  """
  Tag the coordinates of D by their Z2^k-degrees.

  Returns:
      Z2kPresentation: Same laws, the commutation table of the fibre degrees
          present and the Grassmann parity (total weight mod 2) of each coordinate

  Raises:
      SuperisationError: If the sign check fails
  """
  violations = sign_violations(D)
  if violations:
    raise SuperisationError(f"Cannot superise {D.name}: {violations[0]}")
  degrees = _degrees(D)
  present = sorted({d.bits for d in degrees.values() if any(d.bits)})
  table = OrderedDict(((a, b), Z2kDegree(a).sign(Z2kDegree(b)))
                      for a in present for b in present)
  return Z2kPresentation(D.with_changes(name=f"Pi({D.name})"), degrees, table)


def naive_superisation_report(F: GradedBundlePresentation) -> ValidationReport:
  """
  Tag the coordinates of a graded bundle as odd by weight parity and read the laws.

  A monomial with two odd factors is symmetric in them, so its super reading
  vanishes; every such monomial is reported as collapsed.
  """
  odd = {c.name for c in F.coordinates if c.weight.total % 2}
  report = ValidationReport(f"naive superisation {F.name}")
  for t in F.transitions:
    for name, law in t.laws.items():
      collapsed = []
      for coefficient, powers in law.monomials():
        count = sum(e for b, e in powers.items() if str(b) in odd)
        if count >= 2:
          collapsed.append(str(coefficient * sp.Mul(*[b**e for b, e in powers.items()])))
      report.add(f"{t.source}->{t.target} {name} survives", not collapsed,
                 f"collapsed terms {collapsed}" if collapsed else "")
  return report
