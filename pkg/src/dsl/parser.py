"""
Parser for bundle spec files.

A document holds ``bundle`` blocks and ``map`` blocks::

    bundle F2 {
      degree 2;
      base x[1];
      coord y[2] weight (1);
      coord z[1] weight (2);
      fn A[1] invertible inverse Ai;
      fn P[2];
      chart U, V;
      transition U->V {
        x1 = x1;
        y1 = y1*A[1;1] + y2*A[2;1];
        ...
      }
      sigma (2,1) { ... }
    }
    map phi : F2 -> G2 { ... }

Laws are polynomials with ``+ - * ^`` and rational constants; base functions
are written ``T[lower;upper]`` and ``d(x1,x2)T[lower;upper]``.
"""
import re
import warnings
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import sympy as sp
from sympy.parsing.sympy_parser import (convert_xor, parse_expr,
                                        standard_transformations)

from src.algebra.polynomial import GradedPolynomial
from src.algebra.symbols import BaseFunctionSymbol, CoordinateSymbol, MultiWeight
from src.bundles.presentation import FunctionFamily, GradedBundlePresentation, TransitionMap
from src.errors import DslError, PresentationError
from src.functors.flips import Permutation, format_permutation, parse_permutation

TRANSFORMATIONS = standard_transformations + (convert_xor,)

FUNCTION = re.compile(
  r"(?:d\(([^)]*)\))?([A-Za-z][A-Za-z0-9]*)\[([\d,\s]*);([\d,\s]*)\]")
IDENTIFIER = re.compile(r"[A-Za-z_]\w*")
FLOAT = re.compile(r"\d*\.\d|\d+\.")
ALLOWED = re.compile(r"^[\w\s+\-*/^().]*$")
ITEM = re.compile(r"^([A-Za-z]+)\[(\d+)\]$")
NAME = re.compile(r"^[A-Za-z]+\d+(?:_\d+)?$")
POWER = re.compile(r"\^\s*(?:(\d+)|\(\s*(\d+)\s*\))(?![\d\s]*\^)")
MAX_EXPONENT = 16
MAX_DEGREE = 32


@dataclass
class Statement:
  """One statement or block delimiter with the position of its first character."""

  text: str
  line: int
  column: int
  kind: str = "statement"

  def error(self, message: str) -> DslError:
    return DslError(message, self.line, self.column)


def scan(text: str) -> List[Statement]:
  """
  Split a document into statements, block openings and block closings.

  Delimiters inside square brackets belong to function labels such as
  ``A[1;1]`` and do not end a statement.
  """
  statements = []
  buffer = []
  start: Optional[Tuple[int, int]] = None
  line, column = 1, 1
  depth = 0
  i = 0
  while i < len(text):
    char = text[i]
    if char == "#":
      while i < len(text) and text[i] != "\n":
        i += 1
      continue
    if char == "[":
      depth += 1
    elif char == "]":
      depth = max(depth - 1, 0)
    if char in ";{}" and depth == 0:
      content = "".join(buffer).strip()
      if char == "{":
        position = start or (line, column)
        statements.append(Statement(content, position[0], position[1], "open"))
      else:
        if content:
          statements.append(Statement(content, start[0], start[1]))
        if char == "}":
          statements.append(Statement("}", line, column, "close"))
      buffer, start = [], None
    else:
      if start is None and not char.isspace():
        start = (line, column)
      buffer.append(char)
    if char == "\n":
      line, column = line + 1, 1
    else:
      column += 1
    i += 1
  if "".join(buffer).strip():
    statements.append(Statement("".join(buffer).strip(), start[0], start[1]))
  return statements


@dataclass
class DslDocument:
  """Everything declared in one spec file, in declaration order."""

  bundles: Dict[str, GradedBundlePresentation] = field(default_factory=OrderedDict)
  sigmas: Dict[str, Dict[Permutation, TransitionMap]] = field(default_factory=OrderedDict)
  maps: Dict[str, TransitionMap] = field(default_factory=OrderedDict)

  def bundle(self, name: Optional[str] = None) -> GradedBundlePresentation:
    if name is None:
      return next(iter(self.bundles.values()))
    return self.bundles[name]


class _Parser:

  def __init__(self, text: str):
    self.statements = scan(text)
    self.position = 0
    self.document = DslDocument()

  def next(self) -> Optional[Statement]:
    if self.position >= len(self.statements):
      return None
    statement = self.statements[self.position]
    self.position += 1
    return statement

  def parse(self) -> DslDocument:
    while True:
      statement = self.next()
      if statement is None:
        return self.document
      if statement.kind != "open":
        raise statement.error(f"Expected a bundle or map block, got '{statement.text}'")
      match = re.match(r"^bundle\s+(\S+)$", statement.text)
      if match:
        self.bundle(match.group(1), statement)
        continue
      match = re.match(r"^map\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", statement.text)
      if match:
        self.map(*match.groups(), statement)
        continue
      raise statement.error(f"Unknown block '{statement.text}'")

  def block(self, opening: Statement) -> List[Statement]:
    """Statements up to the matching close; nested blocks are flattened in order."""
    body = []
    depth = 0
    while True:
      statement = self.next()
      if statement is None:
        raise opening.error("Block is not closed")
      if statement.kind == "close":
        if depth == 0:
          return body
        depth -= 1
      elif statement.kind == "open":
        depth += 1
      body.append(statement)

  def bundle(self, name: str, opening: Statement) -> None:
    if name in self.document.bundles:
      raise opening.error(f"Bundle '{name}' is declared twice")
    body = self.block(opening)
    declared_degree: Optional[Tuple[int, ...]] = None
    degree_statement = opening
    depth: Optional[int] = None
    entries: List[Tuple[str, Optional[Tuple[int, ...]], Statement]] = []
    functions: Dict[str, FunctionFamily] = OrderedDict()
    charts: List[str] = []
    blocks: List[Tuple[Statement, List[Statement]]] = []

    i = 0
    while i < len(body):
      statement = body[i]
      if statement.kind == "open":
        inner, i = _inner(body, i)
        blocks.append((statement, inner))
        continue
      i += 1
      text = statement.text
      match = re.match(r"^degree\s+(\d+|\([\d,\s]+\))$", text)
      if match:
        declared_degree = _integers(match.group(1))
        degree_statement = statement
        continue
      match = re.match(r"^depth\s+(\d+)$", text)
      if match:
        depth = int(match.group(1))
        continue
      match = re.match(r"^base\s+(.+)$", text)
      if match:
        entries.extend((n, None, statement) for n in _items(match.group(1), statement))
        continue
      match = re.match(r"^coord\s+(.+?)\s+weight\s+(\d+|\([\d,\s]+\))$", text)
      if match:
        weight = _integers(match.group(2))
        entries.extend((n, weight, statement) for n in _items(match.group(1), statement))
        continue
      match = re.match(r"^fn\s+([A-Za-z][A-Za-z0-9]*)\[([\d,\s]*)\]"
                       r"(\s+invertible)?(?:\s+inverse\s+([A-Za-z][A-Za-z0-9]*))?$", text)
      if match:
        family, groups, invertible, inverse = match.groups()
        functions[family] = FunctionFamily(family, _integers(groups) if groups.strip() else (),
                                           bool(invertible), inverse)
        continue
      match = re.match(r"^chart\s+(.+)$", text)
      if match:
        for chart in match.group(1).split(","):
          chart = chart.strip()
          if not re.match(r"^[A-Za-z_]\w*$", chart):
            raise statement.error(f"Invalid chart name '{chart}'")
          charts.append(chart)
        continue
      raise statement.error(f"Unknown statement '{text}'")

    if not entries:
      raise opening.error(f"Bundle '{name}' declares no coordinates")
    n = len(declared_degree) if declared_degree else next(
      (len(w) for _, w, _ in entries if w is not None), 1)
    if depth is None:
      depth = max((len(n_.split("_")[1]) for n_, _, _ in entries if "_" in n_), default=0)

    coordinates = []
    for label, weight, statement in entries:
      if weight is None:
        weight = tuple([0] * n)
      if len(weight) != n:
        raise statement.error(
          f"Coordinate '{label}' has {len(weight)} weights, the bundle has {n}")
      try:
        coordinates.append(CoordinateSymbol.from_name(label, MultiWeight(weight), depth))
      except (PresentationError, ValueError) as e:
        raise statement.error(str(e))
    symbols = OrderedDict((c.name, c.symbol) for c in coordinates)
    base = [c.symbol for c in coordinates if c.weight.is_zero()]

    transitions, generators = [], OrderedDict()
    recorded: List[str] = []
    for header, inner in blocks:
      match = re.match(r"^transition\s+([A-Za-z_]\w*)\s*->\s*([A-Za-z_]\w*)$", header.text)
      if match:
        source, target = match.groups()
        for chart in (source, target):
          if chart not in charts:
            charts.append(chart)
        laws = self.laws(header, inner, symbols, symbols, functions, base, recorded)
        transitions.append(TransitionMap(source, target, laws))
        continue
      match = re.match(r"^sigma\s*\(([\d,\s]+)\)$", header.text)
      if match:
        try:
          g = parse_permutation(match.group(1))
        except ValueError as e:
          raise header.error(str(e))
        if len(g) != n:
          raise header.error(f"Flip ({match.group(1)}) does not permute {n} weight fields")
        laws = self.laws(header, inner, symbols, symbols, functions, base, recorded)
        generators[g] = TransitionMap(name, f"{name}^({format_permutation(g)})", laws)
        continue
      raise header.error(f"Unknown block '{header.text}'")

    try:
      presentation = GradedBundlePresentation(
        name, tuple(coordinates), tuple(charts) or ("U",), tuple(transitions), functions,
        tuple(recorded))
    except PresentationError as e:
      raise opening.error(str(e))
    if declared_degree is not None and presentation.degree_bounds != declared_degree:
      raise degree_statement.error(
        f"Declared degree {declared_degree} but the weights give {presentation.degree_bounds}")
    for message in recorded:
      warnings.warn(message)
    self.document.bundles[name] = presentation
    if generators:
      self.document.sigmas[name] = generators

  def map(self, name: str, source: str, target: str, opening: Statement) -> None:
    for bundle in (source, target):
      if bundle not in self.document.bundles:
        raise opening.error(f"Unknown bundle '{bundle}'")
    body = self.block(opening)
    P, Q = self.document.bundles[source], self.document.bundles[target]
    functions = OrderedDict(P.functions)
    functions.update(Q.functions)
    symbols = OrderedDict((c.name, c.symbol) for c in P.coordinates)
    targets = OrderedDict((c.name, c.symbol) for c in Q.coordinates)
    laws = self.laws(opening, body, symbols, targets, functions, P.base_symbols(), [])
    self.document.maps[name] = TransitionMap(source, target, laws)

  def laws(self, header: Statement, body: List[Statement], symbols: Dict[str, sp.Symbol],
           targets: Dict[str, sp.Symbol], functions: Dict[str, FunctionFamily],
           base: List[sp.Symbol], recorded: List[str]) -> Dict[str, GradedPolynomial]:
    laws = OrderedDict()
    for statement in body:
      if statement.kind != "statement":
        raise statement.error("Blocks cannot be nested here")
      match = re.match(r"^([A-Za-z]+\d+(?:_\d+)?)\s*=\s*(.+)$", statement.text, re.DOTALL)
      if not match:
        raise statement.error(f"Expected '<coordinate> = <polynomial>', got '{statement.text}'")
      target, text = match.groups()
      if target not in targets:
        raise statement.error(f"Unknown coordinate '{target}'")
      if target in laws:
        raise statement.error(f"Second law for '{target}'")
      laws[target] = expression(text, statement, symbols, functions, base, recorded)
    missing = [c for c in targets if c not in laws]
    if missing:
      raise header.error(f"No law for '{missing[0]}'")
    return laws


def _inner(body: List[Statement], start: int) -> Tuple[List[Statement], int]:
  depth = 0
  for i in range(start + 1, len(body)):
    if body[i].kind == "open":
      depth += 1
    elif body[i].kind == "close":
      if depth == 0:
        return body[start + 1:i], i + 1
      depth -= 1
  # block() guarantees a matching close for every opening
  return body[start + 1:], len(body)


def _integers(text: str) -> Tuple[int, ...]:
  return tuple(int(part) for part in text.strip("() ").split(",") if part.strip())


def _items(text: str, statement: Statement) -> List[str]:
  names = []
  for item in text.split(","):
    item = item.strip()
    match = ITEM.match(item)
    if match:
      names.extend(f"{match.group(1)}{i}" for i in range(1, int(match.group(2)) + 1))
    elif NAME.match(item):
      names.append(item)
    else:
      raise statement.error(f"Invalid coordinate '{item}'")
  return names


def expression(text: str, statement: Statement, symbols: Dict[str, sp.Symbol],
               functions: Dict[str, FunctionFamily], base: List[sp.Symbol],
               recorded: List[str]) -> GradedPolynomial:
  """
  Parse one polynomial law.

  Args:
      text (str): Right-hand side
      statement (Statement): Statement for error positions
      symbols (Dict[str, sp.Symbol]): Coordinates the law may use
      functions (Dict[str, FunctionFamily]): Declared base function families
      base (List[sp.Symbol]): Base coordinates the functions depend on
      recorded (List[str]): Receives tensor symmetrisation warnings

  Returns:
      GradedPolynomial: The law

  Raises:
      DslError: On floats, unknown symbols, bad function labels or syntax errors
  """
  text = " ".join(text.split())
  if FLOAT.search(text):
    raise statement.error("Float literals are not allowed, write a fraction")
  placeholders: Dict[str, sp.Expr] = {}

  def replace(match):
    derivative, family, lower, upper = match.groups()
    if family not in functions and not any(f.inverse == family for f in functions.values()):
      raise statement.error(f"Unknown function family '{family}'")
    declared = functions.get(family)
    groups = declared.groups if declared else None
    variables = [v.strip() for v in derivative.split(",")] if derivative else []
    for v in variables:
      if sp.Symbol(v) not in base:
        raise statement.error(f"Derivative by '{v}', which is not a base coordinate")
    with warnings.catch_warnings(record=True) as caught:
      warnings.simplefilter("always")
      try:
        symbol = BaseFunctionSymbol.canonical(
          family, _integers(lower), _integers(upper), groups, variables)
      except PresentationError as e:
        raise statement.error(str(e))
    recorded.extend(str(w.message) for w in caught)
    key = f"__fn{len(placeholders)}__"
    placeholders[key] = symbol.applied(base)
    return f" {key} "

  rewritten = FUNCTION.sub(replace, text)
  if not ALLOWED.match(rewritten):
    bad = next(c for c in rewritten if not re.match(r"[\w\s+\-*/^().]", c))
    raise statement.error(f"Unexpected character '{bad}'")
  if "**" in rewritten:
    raise statement.error("Write powers with '^'")
  powers = POWER.findall(rewritten)
  if len(powers) != rewritten.count("^"):
    raise statement.error("Exponents must be non-negative integer literals")
  for plain, bracketed in powers:
    if int(plain or bracketed) > MAX_EXPONENT:
      raise statement.error(f"Exponent {plain or bracketed} exceeds {MAX_EXPONENT}")
  for identifier in IDENTIFIER.findall(rewritten):
    if identifier not in symbols and identifier not in placeholders:
      raise statement.error(f"Unknown symbol '{identifier}'")

  local = dict(symbols)
  local.update(placeholders)
  try:
    parsed = parse_expr(rewritten, local_dict=local, transformations=TRANSFORMATIONS)
  except Exception as e:
    raise statement.error(f"Cannot parse '{text.strip()}': {str(e)}")
  if not isinstance(parsed, sp.Expr):
    raise statement.error(f"'{text.strip()}' is not an expression")
  if _degree_bound(parsed) > MAX_DEGREE:
    raise statement.error(f"'{text.strip()}' has degree above {MAX_DEGREE}")
  expr = sp.expand(parsed)
  _check_terms(expr, set(symbols.values()) | set(placeholders.values()), text, statement)
  try:
    law = GradedPolynomial(expr)
  except PresentationError as e:
    raise statement.error(str(e))
  return law


def _degree_bound(expr: sp.Expr) -> int:
  """Upper bound on the total degree of expr once expanded."""
  if expr.is_Pow:
    exp = expr.exp
    return _degree_bound(expr.base) * max(int(exp), 0) if exp.is_Integer else 0
  if expr.is_Add:
    return max(_degree_bound(arg) for arg in expr.args)
  if expr.is_Mul:
    return sum(_degree_bound(arg) for arg in expr.args)
  return 0 if expr.is_Number else 1


def _check_terms(expr: sp.Expr, atoms: Set[sp.Expr], text: str, statement: Statement) -> None:
  """Every term must be a finite rational times declared atoms to non-negative powers."""
  for term in sp.Add.make_args(expr):
    coefficient, rest = term.as_coeff_Mul()
    if not (coefficient.is_Rational and coefficient.is_finite):
      raise statement.error(f"'{text.strip()}' has a coefficient that is not a finite fraction")
    if rest == 1:
      continue
    for factor in sp.Mul.make_args(rest):
      base, exp = factor.as_base_exp()
      if base not in atoms:
        raise statement.error(f"'{text.strip()}' is not a polynomial: factor {factor}")
      if not (exp.is_Integer and exp >= 0):
        raise statement.error(f"'{text.strip()}' is not a polynomial: power {factor}")


def parse_document(text: str) -> DslDocument:
  """
  Parse a spec file with any number of bundles and maps.

  Raises:
      DslError: With the line and column of the offending statement
  """
  return _Parser(text).parse()


def parse(text: str) -> GradedBundlePresentation:
  """
  Parse a spec file holding exactly one bundle.

  Raises:
      DslError: On any syntax or semantic error, or when the file does not
          hold exactly one bundle
  """
  document = parse_document(text)
  if len(document.bundles) != 1:
    raise DslError(f"Expected one bundle, found {len(document.bundles)}", 1, 1)
  return document.bundle()
