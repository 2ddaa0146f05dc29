"""
The Lie algebroid carried by a degree-2 symmetric structure.
"""
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import sympy as sp

from src.bundles.validation import ValidationReport
from src.degree2.duality import dual_dvb
from src.degree2.poisson import PoissonTensor
from src.errors import PresentationError
from src.symmetric.structure import SymmetricKFoldVB, dvb_blocks, sigma_coefficients

Combination = Dict[str, sp.Expr]


@dataclass
class AlgebroidStructure:
  """
  Structure functions of a Lie algebroid in a local basis of sections.

  ``brackets[(s, t)]`` gives ``[s, t]`` as a combination of basis sections and
  ``anchor[s]`` gives ``rho(s)`` as components on the base coordinates.
  """

  name: str
  base: List[str]
  sections: List[str]
  brackets: Dict[Tuple[str, str], Combination] = field(default_factory=dict)
  anchor: Dict[str, Combination] = field(default_factory=dict)

  def bracket(self, s: str, t: str) -> Combination:
    if (s, t) in self.brackets:
      return self.brackets[(s, t)]
    if (t, s) in self.brackets:
      return {u: -value for u, value in self.brackets[(t, s)].items()}
    return {}

  def rho(self, s: str, f: sp.Expr) -> sp.Expr:
    """The anchor of a basis section applied to a function of the base."""
    return sp.expand(sum((value * sp.diff(f, sp.Symbol(c))
                          for c, value in self.anchor.get(s, {}).items()), sp.Integer(0)))

  def _bracket_combination(self, combination: Combination, u: str) -> Combination:
    """[sum c^v v, u] by the Leibniz rule in the first slot."""
    result: Combination = {}
    for v, coefficient in combination.items():
      for w, value in self.bracket(v, u).items():
        result[w] = result.get(w, 0) + coefficient * value
      result[v] = result.get(v, 0) - self.rho(u, coefficient)
    return {w: sp.expand(value) for w, value in result.items() if sp.expand(value) != 0}

  def jacobi(self) -> List[str]:
    """Triples of basis sections whose cyclic double bracket does not vanish."""
    problems = []
    names = self.sections
    for a in range(len(names)):
      for b in range(a + 1, len(names)):
        for c in range(b + 1, len(names)):
          s, t, u = names[a], names[b], names[c]
          total: Combination = {}
          for x, y, z in ((s, t, u), (t, u, s), (u, s, t)):
            for w, value in self._bracket_combination(self.bracket(x, y), z).items():
              total[w] = total.get(w, 0) + value
          left = {w: sp.expand(v) for w, v in total.items() if sp.expand(v) != 0}
          if left:
            problems.append(f"({s}, {t}, {u}): {left}")
    return problems

  def anchor_problems(self) -> List[str]:
    """Pairs of basis sections with rho([s, t]) != [rho(s), rho(t)]."""
    problems = []
    names = self.sections
    for a in range(len(names)):
      for b in range(a + 1, len(names)):
        s, t = names[a], names[b]
        for c in self.base:
          image = sum((value * self.anchor.get(v, {}).get(c, 0)
                       for v, value in self.bracket(s, t).items()), sp.Integer(0))
          commutator = (self.rho(s, self.anchor.get(t, {}).get(c, 0))
                        - self.rho(t, self.anchor.get(s, {}).get(c, 0)))
          if sp.expand(image - commutator) != 0:
            problems.append(f"({s}, {t}) on {c}")
    return problems

  def differences(self, other: "AlgebroidStructure") -> List[str]:
    found = []
    for a, s in enumerate(self.sections):
      for t in self.sections[a + 1:]:
        mine, theirs = self.bracket(s, t), other.bracket(s, t)
        for u in sorted(set(mine) | set(theirs)):
          if sp.expand(mine.get(u, 0) - theirs.get(u, 0)) != 0:
            found.append(f"[{s}, {t}] on {u}")
      for c in self.base:
        if sp.expand(self.anchor.get(s, {}).get(c, 0) - other.anchor.get(s, {}).get(c, 0)) != 0:
          found.append(f"rho({s}) on {c}")
    return found

  def validate(self) -> ValidationReport:
    report = ValidationReport(f"algebroid {self.name}")
    asymmetric = [f"[{s}, {t}]" for (s, t), value in self.brackets.items()
                  if (t, s) in self.brackets and any(
                    sp.expand(value.get(u, 0) + self.brackets[(t, s)].get(u, 0)) != 0
                    for u in set(value) | set(self.brackets[(t, s)]))]
    report.add("skew", not asymmetric, "; ".join(asymmetric))
    problems = self.jacobi()
    report.add("jacobi", not problems, problems[0] if problems else "")
    problems = self.anchor_problems()
    report.add("anchor homomorphism", not problems, problems[0] if problems else "")
    return report


def algebroid(S: SymmetricKFoldVB) -> AlgebroidStructure:
  """
  Brackets ``[e_a, e_b] = sigma^i_ab f_i`` and anchor ``rho(e_a) = d/dy01_a``.

  Sections e_a and f_i are named after the leg A momenta dual to the first
  side and to the core; f_i are central and have zero anchor.

  Args:
      S (SymmetricKFoldVB): Degree-2 structure in side-adapted form

  Returns:
      AlgebroidStructure: Structure functions over the base and second side
  """
  coefficients = sigma_coefficients(S)
  first, second, core = dvb_blocks(S.D)
  momentum = dual_dvb(S.D, "A").duals
  e = [momentum[c.name] for c in first]
  f = [momentum[c.name] for c in core]

  brackets = OrderedDict()
  for a in range(len(e)):
    for b in range(len(e)):
      if a != b:
        brackets[(e[a], e[b])] = {
          f[i]: table[(a + 1, b + 1)] for i, table in enumerate(coefficients.values())
          if table[(a + 1, b + 1)] != 0}
  anchor = OrderedDict((e[a], {second[a].name: sp.Integer(1)}) for a in range(len(e)))
  for name in f:
    anchor[name] = {}
  base = [c.name for c in S.D.base_coordinates()] + [c.name for c in second]
  return AlgebroidStructure(S.name, base, e + f, brackets, anchor)


def algebroid_from_poisson(tensor: PoissonTensor, sections: Sequence[str],
                           base: Sequence[str]) -> AlgebroidStructure:
  """
  Read the algebroid off a linear Poisson tensor on the dual.

  ``{s, t}`` of two fibre-linear coordinates gives the bracket and ``{s, c}``
  with a base coordinate gives the anchor.

  Raises:
      PresentationError: If a bracket of linear coordinates is not linear
  """
  symbols = [sp.Symbol(s) for s in sections]
  brackets = OrderedDict()
  for a, s in enumerate(sections):
    for b, t in enumerate(sections):
      if a == b:
        continue
      value = tensor.entry(s, t)
      combination = {u: sp.expand(sp.diff(value, symbol))
                     for u, symbol in zip(sections, symbols)}
      rest = sp.expand(value - sum(c * symbol for c, symbol in zip(combination.values(),
                                                                   symbols)))
      if rest != 0 or any(sp.diff(c, symbol) != 0 for c in combination.values()
                          for symbol in symbols):
        raise PresentationError(f"Bracket {{{s}, {t}}} = {value} is not linear", tensor.name)
      brackets[(s, t)] = {u: c for u, c in combination.items() if c != 0}
  anchor = OrderedDict(
    (s, {c: tensor.entry(s, c) for c in base if tensor.entry(s, c) != 0}) for s in sections)
  return AlgebroidStructure(tensor.name, list(base), list(sections), brackets, anchor)
