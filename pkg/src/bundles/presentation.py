"""
Chart-and-transition presentations of graded bundles.

All charts of a presentation share one coordinate list; a chart is only a name.
A TransitionMap gives the new value of every coordinate as a polynomial in the
old coordinates, and the same shape is used for morphisms and for the flips of
a symmetric structure.
"""
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
from sympy.core.function import AppliedUndef

from src.algebra.polynomial import GradedPolynomial, substitute
from src.algebra.symbols import BaseFunctionSymbol, CoordinateSymbol, MultiWeight
from src.errors import PresentationError


@dataclass(frozen=True)
class FunctionFamily:
  """Declared family of opaque transition tensors such as ``A[j;i]``."""

  name: str
  groups: Tuple[int, ...] = (1,)
  invertible: bool = False
  inverse: Optional[str] = None

  @property
  def lower_arity(self) -> int:
    return sum(self.groups)

  @property
  def is_base_map(self) -> bool:
    """Invertible families without lower indices describe the base change."""
    return self.invertible and self.lower_arity == 0


@dataclass(frozen=True)
class TransitionMap:
  """Coordinate law: target coordinate name -> polynomial in source names."""

  source: str
  target: str
  laws: Mapping[str, GradedPolynomial] = field(default_factory=dict)

  def law(self, name: str) -> GradedPolynomial:
    try:
      return self.laws[name]
    except KeyError:
      raise PresentationError(f"No law for '{name}'", f"{self.source}->{self.target}")

  def renamed(self, mapping: Mapping[str, str]) -> "TransitionMap":
    """Rename coordinates on both sides of every law."""
    symbols = {sp.Symbol(old): sp.Symbol(new) for old, new in mapping.items()}
    laws = OrderedDict()
    for name, law in self.laws.items():
      laws[mapping.get(name, name)] = GradedPolynomial(law.expr.xreplace(symbols))
    return TransitionMap(self.source, self.target, laws)

  def restricted(self, names: Iterable[str]) -> "TransitionMap":
    keep = set(names)
    return TransitionMap(
      self.source, self.target,
      OrderedDict((n, p) for n, p in self.laws.items() if n in keep))

  def is_identity(self) -> bool:
    return all(law == GradedPolynomial.of(name) for name, law in self.laws.items())

  def __str__(self) -> str:
    lines = [f"{self.source}->{self.target}"]
    lines.extend(f"  {name}' = {law}" for name, law in self.laws.items())
    return "\n".join(lines)


@dataclass(frozen=True)
class GradedBundlePresentation:
  """
  An n-fold graded bundle given by weighted coordinates and transition laws.

  The weight vector fields are carried by the coordinate weights. The base is
  the set of zero-weight coordinates, and every base function symbol depends on
  all of them.
  """

  name: str
  coordinates: Tuple[CoordinateSymbol, ...]
  charts: Tuple[str, ...] = ("U",)
  transitions: Tuple[TransitionMap, ...] = ()
  functions: Mapping[str, FunctionFamily] = field(default_factory=dict)
  warnings: Tuple[str, ...] = field(default=(), compare=False)

  def __post_init__(self):
    if not self.coordinates:
      raise PresentationError("A presentation needs at least one coordinate", self.name)

    seen = set()
    n = self.coordinates[0].weight.n
    for c in self.coordinates:
      if c.name in seen:
        raise PresentationError(f"Duplicate coordinate '{c.name}'", self.name)
      seen.add(c.name)
      if c.weight.n != n:
        raise PresentationError(
          f"Weight length mismatch for '{c.name}': expected {n}, got {c.weight.n}",
          self.name)

    if len(set(self.charts)) != len(self.charts):
      raise PresentationError("Duplicate chart name", self.name)
    for t in self.transitions:
      location = f"{self.name} {t.source}->{t.target}"
      if t.source not in self.charts or t.target not in self.charts:
        raise PresentationError("Transition between undeclared charts", location)
      if set(t.laws) != seen:
        missing = sorted(seen - set(t.laws))
        extra = sorted(set(t.laws) - seen)
        raise PresentationError(
          f"Laws must cover each coordinate exactly once (missing {missing}, extra {extra})",
          location)
      for target, law in t.laws.items():
        unknown = law.coordinates() - seen
        if unknown:
          raise PresentationError(
            f"Law of '{target}' mentions unknown coordinate '{sorted(unknown)[0]}'",
            location)

  @property
  def n(self) -> int:
    return self.coordinates[0].weight.n

  @property
  def degree_bounds(self) -> Tuple[int, ...]:
    return tuple(
      max(c.weight.components[s] for c in self.coordinates) for s in range(self.n))

  @property
  def degree(self) -> int:
    """Maximal total weight."""
    return max(c.weight.total for c in self.coordinates)

  @property
  def weights(self) -> Dict[str, MultiWeight]:
    return {c.name: c.weight for c in self.coordinates}

  @property
  def names(self) -> List[str]:
    return [c.name for c in self.coordinates]

  @property
  def depth(self) -> int:
    return max(len(c.lift) for c in self.coordinates)

  def coordinate(self, name: str) -> CoordinateSymbol:
    for c in self.coordinates:
      if c.name == name:
        return c
    raise PresentationError(f"Unknown coordinate '{name}'", self.name)

  def base_coordinates(self) -> List[CoordinateSymbol]:
    return [c for c in self.coordinates if c.kind == "base"]

  def fibre_coordinates(self) -> List[CoordinateSymbol]:
    return [c for c in self.coordinates if c.kind == "fibre"]

  def base_symbols(self) -> List[sp.Symbol]:
    return [c.symbol for c in self.base_coordinates()]

  def transition(self, source: str, target: str) -> TransitionMap:
    for t in self.transitions:
      if t.source == source and t.target == target:
        return t
    raise PresentationError(f"No transition {source}->{target}", self.name)

  def declared_inverses(self) -> List[Tuple[str, str]]:
    return sorted(
      (f.name, f.inverse) for f in self.functions.values() if f.inverse)

  def inverse_family(self, family: str) -> Optional[str]:
    declared = self.functions.get(family)
    if declared and declared.inverse:
      return declared.inverse
    for f in self.functions.values():
      if f.inverse == family:
        return f.name
    return None

  def function_symbol(self, family: str, lower: Sequence[int],
                      upper: Sequence[int]) -> sp.Expr:
    return BaseFunctionSymbol(family, tuple(lower), tuple(upper)).applied(
      self.base_symbols())

  def with_changes(self, **changes) -> "GradedBundlePresentation":
    return replace(self, **changes)


def identity_map(coordinates: Iterable[CoordinateSymbol], source: str = "U",
                 target: Optional[str] = None) -> TransitionMap:
  """Identity law on the given coordinates."""
  laws = OrderedDict((c.name, GradedPolynomial.of(c)) for c in coordinates)
  return TransitionMap(source, target or source, laws)


def compose_maps(first: TransitionMap, second: TransitionMap) -> TransitionMap:
  """
  Compose two coordinate laws: apply ``first``, then ``second``.

  Args:
      first (TransitionMap): Map whose outputs feed the variables of ``second``
      second (TransitionMap): Map applied last

  Returns:
      TransitionMap: The composite, from ``first.source`` to ``second.target``

  Raises:
      MissingAssignmentError: If ``first`` does not cover a variable of ``second``
  """
  laws = OrderedDict(
    (name, substitute(law, first.laws, strict=True))
    for name, law in second.laws.items())
  return TransitionMap(first.source, second.target, laws)


def rename_coordinates(P: GradedBundlePresentation, mapping: Mapping[str, str],
                       name: Optional[str] = None,
                       weights: Optional[Mapping[str, MultiWeight]] = None
                       ) -> GradedBundlePresentation:
  """
  Rename fibre coordinates of a presentation.

  Args:
      P (GradedBundlePresentation): Presentation to rename
      mapping (Mapping[str, str]): Old name -> new name; missing names are kept
      name (str, optional): Name of the result
      weights (Mapping[str, MultiWeight], optional): New weights by new name

  Returns:
      GradedBundlePresentation: Renamed presentation
  """
  for c in P.base_coordinates():
    if mapping.get(c.name, c.name) != c.name:
      raise PresentationError(f"Base coordinate '{c.name}' cannot be renamed", P.name)

  coordinates = []
  for c in P.coordinates:
    new = mapping.get(c.name, c.name)
    weight = (weights or {}).get(new, c.weight)
    if new == c.name:
      coordinates.append(c.reweighted(weight))
    else:
      coordinates.append(CoordinateSymbol.from_name(new, weight))
  return replace(
    P, name=name or P.name, coordinates=tuple(coordinates),
    transitions=tuple(t.renamed(mapping) for t in P.transitions))


def presentation_differences(P: GradedBundlePresentation,
                             Q: GradedBundlePresentation) -> List[str]:
  """
  Compare two presentations coordinate by coordinate and law by law.

  Args:
      P (GradedBundlePresentation): First presentation
      Q (GradedBundlePresentation): Second presentation

  Returns:
      List[str]: Human readable differences, empty when the presentations agree
  """
  differences = []
  p_weights, q_weights = P.weights, Q.weights
  for name in sorted(set(p_weights) | set(q_weights)):
    if name not in q_weights:
      differences.append(f"coordinate {name} only in {P.name}")
    elif name not in p_weights:
      differences.append(f"coordinate {name} only in {Q.name}")
    elif p_weights[name] != q_weights[name]:
      differences.append(
        f"coordinate {name} has weight {p_weights[name]} vs {q_weights[name]}")
  if differences:
    return differences

  for t in P.transitions:
    try:
      other = Q.transition(t.source, t.target)
    except PresentationError:
      differences.append(f"transition {t.source}->{t.target} only in {P.name}")
      continue
    differences.extend(
      f"{t.source}->{t.target}: {diff}" for diff in map_differences(t, other))
  for t in Q.transitions:
    if not any(s.source == t.source and s.target == t.target for s in P.transitions):
      differences.append(f"transition {t.source}->{t.target} only in {Q.name}")
  return differences


def map_differences(a: TransitionMap, b: TransitionMap) -> List[str]:
  """Law-by-law differences of two coordinate maps."""
  differences = []
  for name in sorted(set(a.laws) | set(b.laws)):
    if name not in a.laws or name not in b.laws:
      differences.append(f"{name}: law missing on one side")
      continue
    delta = a.laws[name] - b.laws[name]
    if not delta.is_zero():
      differences.append(f"{name}: {a.laws[name]} != {b.laws[name]}")
  return differences


def linear_block_inverse(P: GradedBundlePresentation,
                         block: Sequence[CoordinateSymbol],
                         matrix: Sequence[Sequence[sp.Expr]]
                         ) -> List[List[sp.Expr]]:
  """
  Invert the linear part of one weight block.

  ``matrix[r][c]`` is the coefficient of block coordinate r in the law of block
  coordinate c. Sub-blocks of one coordinate family are inverted exactly when
  constant, or through the declared inverse family when every entry reads
  ``q * A[j;i]`` with one rational q.

  Args:
      P (GradedBundlePresentation): Presentation declaring the inverse families
      block (Sequence[CoordinateSymbol]): Coordinates of the block
      matrix: Square coefficient matrix over the base algebra

  Returns:
      List[List[sp.Expr]]: Inverse matrix, same indexing convention

  Raises:
      PresentationError: If the block cannot be inverted symbolically
  """
  size = len(block)
  inverse = [[sp.Integer(0)] * size for _ in range(size)]
  families = OrderedDict()
  for position, c in enumerate(block):
    families.setdefault(c.family, []).append(position)

  for r in range(size):
    for c in range(size):
      if block[r].family != block[c].family and sp.expand(matrix[r][c]) != 0:
        raise PresentationError(
          f"Linear block mixes families {block[r].family} and {block[c].family}",
          P.name)

  for family, positions in families.items():
    sub = sp.Matrix([[sp.expand(matrix[r][c]) for c in positions] for r in positions])
    if not sub.free_symbols and not sub.atoms(AppliedUndef):
      if sub.det() == 0:
        raise PresentationError(f"Singular constant block for family {family}", P.name)
      sub_inverse = sub.inv()
      for i, r in enumerate(positions):
        for j, c in enumerate(positions):
          inverse[r][c] = sub_inverse[i, j]
      continue

    scale, tensor = _scaled_tensor(sub, [block[p] for p in positions], P)
    partner = P.inverse_family(tensor)
    if partner is None:
      raise PresentationError(
        f"Linear block uses '{tensor}' which has no declared inverse", P.name)
    for r in positions:
      for c in positions:
        inverse[r][c] = P.function_symbol(
          partner, (block[r].index,), (block[c].index,)) / scale
  return inverse


def _scaled_tensor(sub: sp.Matrix, coordinates: Sequence[CoordinateSymbol],
                   P: GradedBundlePresentation) -> Tuple[sp.Rational, str]:
  scale = None
  tensor = None
  for i, row in enumerate(coordinates):
    for j, column in enumerate(coordinates):
      entry = GradedPolynomial(sub[i, j])
      monomials = entry.monomials()
      if len(monomials) != 1:
        raise PresentationError(f"Cannot invert linear entry {entry}", P.name)
      coefficient, powers = monomials[0]
      if len(powers) != 1:
        raise PresentationError(f"Cannot invert linear entry {entry}", P.name)
      (factor, exp), = powers.items()
      if exp != 1 or not isinstance(factor, AppliedUndef):
        raise PresentationError(f"Cannot invert linear entry {entry}", P.name)
      symbol = BaseFunctionSymbol.from_sympy(factor)
      if symbol.lower != (row.index,) or symbol.upper != (column.index,):
        raise PresentationError(f"Linear entry {entry} is not indexed by its block", P.name)
      if scale is None:
        scale, tensor = coefficient, symbol.family
      elif scale != coefficient or tensor != symbol.family:
        raise PresentationError("Linear block is not a scaled tensor", P.name)
  return scale, tensor


def block_triangular_inverse(matrix: sp.Matrix, blocks: Sequence[Sequence[int]],
                             diagonal_inverse: sp.Matrix) -> sp.Matrix:
  """
  Invert ``M = L + N`` with L block diagonal and N nilpotent.

  Args:
      matrix (sp.Matrix): The full matrix M
      blocks (Sequence[Sequence[int]]): Row positions of each diagonal block
      diagonal_inverse (sp.Matrix): Inverse of the block diagonal part L

  Returns:
      sp.Matrix: ``sum_m (-L^-1 N)^m L^-1``, expanded
  """
  size = matrix.shape[0]
  owner = {}
  for number, block in enumerate(blocks):
    for position in block:
      owner[position] = number
  off_diagonal = sp.Matrix(size, size, lambda r, c: (
    0 if owner[r] == owner[c] else matrix[r, c]))

  step = (-diagonal_inverse * off_diagonal).applyfunc(sp.expand)
  term = diagonal_inverse
  result = diagonal_inverse
  for _ in range(len(blocks)):
    term = (step * term).applyfunc(sp.expand)
    if term.is_zero_matrix:
      break
    result = result + term
  return result.applyfunc(sp.expand)


def invert_transition(P: GradedBundlePresentation, t: TransitionMap) -> TransitionMap:
  """
  Invert a transition law block by block in increasing total weight.

  Writing the law of a weight block as ``u' = u L + N(lower weights)``, the old
  coordinates are ``u = (u' - N) L^-1`` with N already expressed in the new
  coordinates.

  Args:
      P (GradedBundlePresentation): Presentation the law belongs to
      t (TransitionMap): Law to invert

  Returns:
      TransitionMap: The inverse law, from ``t.target`` to ``t.source``

  Raises:
      PresentationError: If the base change is not the identity or a linear
          block cannot be inverted
  """
  old = OrderedDict()
  for c in P.base_coordinates():
    if t.law(c.name) != GradedPolynomial.of(c):
      raise PresentationError(
        f"Only identity base changes can be inverted, '{c.name}' moves", P.name)
    old[c.name] = GradedPolynomial.of(c)

  blocks = OrderedDict()
  fibres = sorted(P.fibre_coordinates(), key=lambda c: (c.weight.total, c.weight.components))
  for c in fibres:
    blocks.setdefault(c.weight, []).append(c)

  for weight, block in blocks.items():
    matrix = [[sp.diff(t.law(c.name).expr, r.symbol) for c in block] for r in block]
    for row in matrix:
      for entry in row:
        if entry.free_symbols - set(P.base_symbols()):
          raise PresentationError(
            f"Law of weight {weight} is not linear in its own block", P.name)
    inverse = linear_block_inverse(P, block, matrix)

    shifted = []
    for j, c in enumerate(block):
      linear = sum((block[i].symbol * matrix[i][j] for i in range(len(block))),
                   sp.Integer(0))
      remainder = GradedPolynomial(t.law(c.name).expr - linear)
      shifted.append(GradedPolynomial.of(c) - substitute(remainder, old, strict=True))

    for i, c in enumerate(block):
      old[c.name] = sum(
        (shifted[j] * inverse[j][i] for j in range(len(block))), GradedPolynomial.zero())

  laws = OrderedDict((c.name, old[c.name]) for c in P.coordinates)
  return TransitionMap(t.target, t.source, laws)
