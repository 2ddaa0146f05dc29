"""
Linear Poisson tensors on the leg A dual of a degree-2 symmetric structure.
"""
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from src.algebra.symbols import CoordinateSymbol, MultiWeight
from src.bundles.validation import ValidationReport
from src.degree2.duality import dual_dvb, fibre_inverse
from src.symmetric.diagonal import roundtrip_iso
from src.symmetric.structure import SymmetricKFoldVB, dvb_blocks, sigma_coefficients


@dataclass
class PoissonTensor:
  """
  Bivector on a coordinate chart, stored as its skew matrix of brackets.

  ``entry(i, j)`` is the bracket ``{x_i, x_j}``.
  """

  name: str
  coordinates: List[str]
  entries: Dict[Tuple[str, str], sp.Expr] = field(default_factory=dict)
  report: Optional[ValidationReport] = None

  @classmethod
  def from_brackets(cls, name: str, coordinates: Sequence[str],
                    brackets: Mapping[Tuple[str, str], sp.Expr]) -> "PoissonTensor":
    entries = {}
    for (i, j), value in brackets.items():
      value = sp.expand(value)
      if value != 0:
        entries[(i, j)] = value
        entries[(j, i)] = -value
    return cls(name, list(coordinates), entries)

  def entry(self, i: str, j: str) -> sp.Expr:
    return self.entries.get((i, j), sp.Integer(0))

  def symbols(self) -> List[sp.Symbol]:
    return [sp.Symbol(c) for c in self.coordinates]

  def bracket(self, f: sp.Expr, g: sp.Expr) -> sp.Expr:
    """Poisson bracket of two functions of the chart coordinates."""
    total = sp.Integer(0)
    for (i, j), value in self.entries.items():
      total += value * sp.diff(f, sp.Symbol(i)) * sp.diff(g, sp.Symbol(j))
    return sp.expand(total)

  def schouten(self) -> Dict[Tuple[str, str, str], sp.Expr]:
    """
    Non-zero components of the Jacobiator, proportional to the Schouten square.

    Returns:
        Dict[Tuple[str, str, str], sp.Expr]: (i, j, k) with i < j < k in chart
            order -> cyclic sum of {x_i, {x_j, x_k}}
    """
    result = OrderedDict()
    names = self.coordinates
    for a in range(len(names)):
      for b in range(a + 1, len(names)):
        for c in range(b + 1, len(names)):
          i, j, k = names[a], names[b], names[c]
          value = sp.expand(
            self.bracket(sp.Symbol(i), self.entry(j, k))
            + self.bracket(sp.Symbol(j), self.entry(k, i))
            + self.bracket(sp.Symbol(k), self.entry(i, j)))
          if value != 0:
            result[(i, j, k)] = value
    return result

  def lie_derivative(self, vector_field: Mapping[str, sp.Expr]) -> "PoissonTensor":
    """Lie derivative along a vector field given by its components."""
    def apply(f):
      return sum((component * sp.diff(f, sp.Symbol(c))
                  for c, component in vector_field.items()), sp.Integer(0))

    brackets = {}
    names = self.coordinates
    for a in range(len(names)):
      for b in range(a + 1, len(names)):
        i, j = names[a], names[b]
        value = apply(self.entry(i, j))
        for l in names:
          value -= self.entry(l, j) * sp.diff(vector_field.get(i, 0), sp.Symbol(l))
          value -= self.entry(i, l) * sp.diff(vector_field.get(j, 0), sp.Symbol(l))
        brackets[(i, j)] = value
    return PoissonTensor.from_brackets(f"L({self.name})", names, brackets)

  def transported(self, theta: Mapping[str, sp.Expr], coordinates: Sequence[str],
                  name: str) -> "PoissonTensor":
    """
    The tensor on the source chart of a diffeomorphism theta that theta carries to this one.

    Args:
        theta (Mapping[str, sp.Expr]): This chart's coordinates as functions of
            the source coordinates
        coordinates (Sequence[str]): Source coordinates
        name (str): Name of the result

    Returns:
        PoissonTensor: ``J^-1 (Lambda o theta) J^-T`` with J the Jacobian of theta
    """
    mapping = {sp.Symbol(c): sp.sympify(theta[c]) for c in self.coordinates}
    source = [sp.Symbol(c) for c in coordinates]
    jacobian = sp.Matrix(len(self.coordinates), len(source),
                         lambda k, i: sp.diff(mapping[sp.Symbol(self.coordinates[k])],
                                              source[i]))
    values = sp.Matrix(len(self.coordinates), len(self.coordinates),
                       lambda k, l: self.entry(self.coordinates[k],
                                               self.coordinates[l]).xreplace(mapping))
    inverse = jacobian.inv(method="LU").applyfunc(lambda e: sp.expand(sp.cancel(e)))
    result = (inverse * values * inverse.T).applyfunc(lambda e: sp.expand(sp.cancel(e)))
    brackets = {(coordinates[a], coordinates[b]): result[a, b]
                for a in range(len(coordinates)) for b in range(a + 1, len(coordinates))}
    return PoissonTensor.from_brackets(name, coordinates, brackets)

  def differences(self, other: "PoissonTensor") -> List[str]:
    if set(self.coordinates) != set(other.coordinates):
      return [f"charts differ: {sorted(set(self.coordinates) ^ set(other.coordinates))}"]
    found = []
    for key in sorted(set(self.entries) | set(other.entries)):
      if sp.expand(self.entry(*key) - other.entry(*key)) != 0:
        found.append(f"{{{key[0]}, {key[1]}}}: {self.entry(*key)} vs {other.entry(*key)}")
    return found


def euler_field(weights: Mapping[str, MultiWeight], slot: int) -> Dict[str, sp.Expr]:
  """Weight vector field of one weight slot: sum of w x d/dx."""
  return {name: w.components[slot] * sp.Symbol(name)
          for name, w in weights.items() if w.components[slot]}


def validate_poisson(tensor: PoissonTensor, weights: Mapping[str, MultiWeight],
                     expected: Sequence[int] = (-1, -2)) -> ValidationReport:
  """Jacobi identity and homogeneity of a bivector."""
  report = ValidationReport(f"poisson {tensor.name}")
  jacobiator = tensor.schouten()
  detail = ""
  if jacobiator:
    (i, j, k), value = next(iter(jacobiator.items()))
    detail = f"Jacobiator at ({i}, {j}, {k}) = {value}"
  report.add("jacobi", not jacobiator, detail)
  for slot, eigenvalue in enumerate(expected):
    derivative = tensor.lie_derivative(euler_field(weights, slot))
    scaled = PoissonTensor(tensor.name, tensor.coordinates,
                           {key: eigenvalue * value for key, value in tensor.entries.items()})
    differences = derivative.differences(scaled)
    report.add(f"weight {slot + 1} eigenvalue {eigenvalue}", not differences,
               differences[0] if differences else "")
  return report


def poisson(S: SymmetricKFoldVB) -> PoissonTensor:
  """
  The linear Poisson tensor on the leg A dual induced by a degree-2 structure.

  ``{p_a, p_b} = sigma^i_ab p_i`` on momenta dual to the first side and
  ``{p_a, y01_a} = 1``; everything else vanishes.

  Args:
      S (SymmetricKFoldVB): Degree-2 structure in side-adapted form

  Returns:
      PoissonTensor: Tensor with a report on Jacobi and bi-weight (-1, -2)
  """
  coefficients = sigma_coefficients(S)
  first, second, core = dvb_blocks(S.D)
  dual = dual_dvb(S.D, "A")
  momentum = dual.duals

  brackets = {}
  for a, ya in enumerate(first, start=1):
    for b, yb in enumerate(first, start=1):
      if a < b:
        brackets[(momentum[ya.name], momentum[yb.name])] = sum(
          (table[(a, b)] * sp.Symbol(momentum[z]) for z, table in coefficients.items()),
          sp.Integer(0))
    brackets[(momentum[ya.name], second[a - 1].name)] = sp.Integer(1)

  tensor = PoissonTensor.from_brackets(f"Lambda({S.name})", dual.presentation.names,
                                       brackets)
  tensor.report = validate_poisson(tensor, dual.presentation.weights)
  return tensor


def _fibre_order(c: CoordinateSymbol):
  return (c.weight.components, c.family, c.index, c.lift)


def transport_poisson(S: SymmetricKFoldVB) -> PoissonTensor:
  """
  Transport the canonical tensor of the linearisation to D through the round trip.

  The leg A dual of the isomorphism I : D -> Lin(F) identifies the two duals;
  the canonical tensor of Lin(F), whose flips are pure permutations, is
  carried back to the leg A dual of D.

  Returns:
      PoissonTensor: Tensor on the leg A dual of D, to be compared with poisson(S)
  """
  roundtrip = roundtrip_iso(S)
  lin = roundtrip.lin
  canonical = poisson(SymmetricKFoldVB.canonical(lin))
  dual, dual_lin = dual_dvb(S.D, "A"), dual_dvb(lin, "A")

  rows = sorted(dual.fibre, key=_fibre_order)
  columns = sorted(dual_lin.fibre, key=_fibre_order)
  matrix = [[sp.expand(sp.diff(roundtrip.iso.law(c.name).expr, r.symbol)) for c in columns]
            for r in rows]
  inverse = fibre_inverse(S.D, rows, matrix)

  theta = OrderedDict()
  for c in dual_lin.base:
    theta[c.name] = roundtrip.iso.law(c.name).expr
  for b, c in enumerate(columns):
    theta[dual_lin.duals[c.name]] = sp.expand(sum(
      (inverse[b, a] * sp.Symbol(dual.duals[r.name]) for a, r in enumerate(rows)),
      sp.Integer(0)))

  tensor = canonical.transported(theta, dual.presentation.names, f"I*Lambda({S.name})")
  tensor.report = validate_poisson(tensor, dual.presentation.weights)
  return tensor
