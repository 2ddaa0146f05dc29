"""
Canonical text form of presentations, flips and maps.
"""
from typing import List, Mapping, Optional, Sequence

import sympy as sp

from src.algebra.polynomial import GradedPolynomial
from src.algebra.symbols import BaseFunctionSymbol
from src.bundles.presentation import FunctionFamily, GradedBundlePresentation, TransitionMap
from src.functors.flips import Permutation, format_permutation

INDENT = "  "


def format_factor(base: sp.Expr, exp: int) -> str:
  if isinstance(base, sp.Symbol):
    text = base.name
  else:
    text = str(BaseFunctionSymbol.from_sympy(base))
  return text if exp == 1 else f"{text}^{exp}"


def format_polynomial(p: GradedPolynomial) -> str:
  """Terms sorted by their factors, with rational coefficients written as fractions."""
  terms = []
  for coefficient, powers in p.monomials():
    factors = sorted(format_factor(b, e) for b, e in powers.items())
    body = "*".join(factors)
    if not factors:
      text = str(coefficient)
    elif coefficient == 1:
      text = body
    elif coefficient == -1:
      text = "-" + body
    else:
      text = f"{coefficient}*{body}"
    terms.append((body, text))
  if not terms:
    return "0"
  terms.sort()
  result = terms[0][1]
  for _, text in terms[1:]:
    result += f" - {text[1:]}" if text.startswith("-") else f" + {text}"
  return result


def _weight(components: Sequence[int]) -> str:
  return "(" + ",".join(str(w) for w in components) + ")"


def _family(f: FunctionFamily) -> str:
  text = f"fn {f.name}[{','.join(str(g) for g in f.groups)}]"
  if f.invertible:
    text += " invertible"
  if f.inverse:
    text += f" inverse {f.inverse}"
  return text + ";"


def _laws(header: str, t: TransitionMap, indent: str) -> List[str]:
  lines = [f"{indent}{header} {{"]
  for name, law in t.laws.items():
    lines.append(f"{indent}{INDENT}{name} = {format_polynomial(law)};")
  lines.append(f"{indent}}}")
  return lines


def print_presentation(P: GradedBundlePresentation,
                       sigmas: Optional[Mapping[Permutation, TransitionMap]] = None) -> str:
  """
  The spec-file text of a presentation, optionally with flip generators.

  Args:
      P (GradedBundlePresentation): Presentation to print
      sigmas (Mapping[Permutation, TransitionMap], optional): Flips to emit
          as ``sigma`` blocks

  Returns:
      str: Text that parses back to an equal presentation
  """
  bounds = P.degree_bounds
  degree = str(bounds[0]) if P.n == 1 else _weight(bounds)
  lines = [f"bundle {P.name} {{", f"{INDENT}degree {degree};"]
  if P.depth:
    lines.append(f"{INDENT}depth {P.depth};")
  for family in P.functions.values():
    lines.append(INDENT + _family(family))
  lines.append(f"{INDENT}chart {', '.join(P.charts)};")
  for c in P.coordinates:
    if c.weight.is_zero():
      lines.append(f"{INDENT}base {c.name};")
    else:
      lines.append(f"{INDENT}coord {c.name} weight {_weight(c.weight.components)};")
  for t in P.transitions:
    lines.extend(_laws(f"transition {t.source}->{t.target}", t, INDENT))
  for g, sigma in sorted((sigmas or {}).items()):
    lines.extend(_laws(f"sigma ({format_permutation(g)})", sigma, INDENT))
  lines.append("}")
  return "\n".join(lines) + "\n"


def print_map(name: str, phi: TransitionMap) -> str:
  return "\n".join(_laws(f"map {name} : {phi.source} -> {phi.target}", phi, "")) + "\n"
