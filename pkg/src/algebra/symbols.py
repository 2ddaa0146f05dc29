"""
Weighted coordinate symbols and opaque base function symbols.
"""
import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import sympy as sp
from sympy.core.function import AppliedUndef

from src.errors import PresentationError

COORDINATE_NAME = re.compile(r"^([A-Za-z]+)(\d+)(?:_(\d+))?$")
FUNCTION_LABEL = re.compile(r"^([A-Za-z][A-Za-z0-9]*)\[([\d,]*);([\d,]*)\]$")


class SymmetrisationWarning(UserWarning):
  """Lower indices of a transition tensor were reordered on ingestion."""


@dataclass(frozen=True)
class MultiWeight:
  """Vector of non-negative weights, one slot per weight vector field."""

  components: Tuple[int, ...]

  def __post_init__(self):
    if any(c < 0 for c in self.components):
      raise PresentationError(f"Negative weight component in {self.components}")

  @classmethod
  def zero(cls, n: int) -> "MultiWeight":
    return cls(tuple([0] * n))

  @property
  def n(self) -> int:
    return len(self.components)

  @property
  def total(self) -> int:
    return sum(self.components)

  def is_zero(self) -> bool:
    return self.total == 0

  def is_euler(self) -> bool:
    """True when every component is 0 or 1 (k-fold vector bundle weights)."""
    return all(c in (0, 1) for c in self.components)

  def __add__(self, other: "MultiWeight") -> "MultiWeight":
    if self.n != other.n:
      raise PresentationError(
        f"Weight length mismatch: {self.components} vs {other.components}")
    return MultiWeight(tuple(a + b for a, b in zip(self.components, other.components)))

  def __le__(self, other: "MultiWeight") -> bool:
    return all(a <= b for a, b in zip(self.components, other.components))

  def appended(self, value: int) -> "MultiWeight":
    return MultiWeight(self.components + (value,))

  def permuted(self, g: Sequence[int]) -> "MultiWeight":
    """Weights of the flip D^g: slot i reads slot g(i)."""
    return MultiWeight(tuple(self.components[g[i]] for i in range(self.n)))

  def __str__(self) -> str:
    return "(" + ",".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class WeightCombo:
  """Integer combination X = sum a_s Delta^s of the weight vector fields."""

  coefficients: Tuple[int, ...]

  @classmethod
  def component(cls, n: int, s: int) -> "WeightCombo":
    return cls(tuple(1 if i == s else 0 for i in range(n)))

  @classmethod
  def total(cls, n: int) -> "WeightCombo":
    return cls(tuple([1] * n))

  def evaluate(self, weight: MultiWeight) -> int:
    if len(self.coefficients) != weight.n:
      raise PresentationError(
        f"Weight combination {self.coefficients} does not match weight {weight}")
    return sum(a * w for a, w in zip(self.coefficients, weight.components))

  def is_non_negative(self) -> bool:
    return all(a >= 0 for a in self.coefficients)

  def __neg__(self) -> "WeightCombo":
    return WeightCombo(tuple(-a for a in self.coefficients))

  def __str__(self) -> str:
    return "(" + ",".join(str(a) for a in self.coefficients) + ")"


@dataclass(frozen=True, eq=False)
class CoordinateSymbol:
  """A homogeneous coordinate y^{i,(eps)} of a chart."""

  family: str
  index: int
  weight: MultiWeight
  lift: Tuple[int, ...] = ()

  @classmethod
  def from_name(cls, name: str, weight: MultiWeight,
                depth: int = 0) -> "CoordinateSymbol":
    """Recover a coordinate from its printed name.

    Args:
        name (str): Name such as ``y1`` or ``z1_011``
        weight (MultiWeight): Weight of the coordinate
        depth (int): Lift depth used to pad bare names

    Returns:
        CoordinateSymbol: The coordinate

    Raises:
        PresentationError: If the name is not a coordinate name
    """
    match = COORDINATE_NAME.match(name)
    if not match:
      raise PresentationError(f"Invalid coordinate name '{name}'")
    family, index, digits = match.groups()
    lift = tuple(int(d) for d in digits) if digits else tuple([0] * depth)
    return cls(family, int(index), weight, lift)

  @property
  def name(self) -> str:
    base = f"{self.family}{self.index}"
    if any(self.lift):
      return base + "_" + "".join(str(d) for d in self.lift)
    return base

  @property
  def kind(self) -> str:
    return "base" if self.weight.is_zero() else "fibre"

  @property
  def symbol(self) -> sp.Symbol:
    return sp.Symbol(self.name)

  @property
  def origin(self) -> Tuple[str, int]:
    return (self.family, self.index)

  def lifted(self, bit: int) -> "CoordinateSymbol":
    """Copy produced by one tangent lift: bit 0 keeps u, bit 1 is u-dot."""
    return CoordinateSymbol(self.family, self.index, self.weight.appended(bit),
                            self.lift + (bit,))

  def reweighted(self, weight: MultiWeight) -> "CoordinateSymbol":
    return CoordinateSymbol(self.family, self.index, weight, self.lift)

  def relabelled(self, lift: Tuple[int, ...]) -> "CoordinateSymbol":
    return CoordinateSymbol(self.family, self.index, self.weight, lift)

  def __eq__(self, other) -> bool:
    if not isinstance(other, CoordinateSymbol):
      return NotImplemented
    return self.name == other.name and self.weight == other.weight

  def __hash__(self) -> int:
    return hash((self.name, self.weight))

  def __repr__(self) -> str:
    return f"CoordinateSymbol({self.name}, weight={self.weight})"


@dataclass(frozen=True)
class BaseFunctionSymbol:
  """Opaque transition tensor T_{lower}^{upper}(x) with a derivative multi-index."""

  family: str
  lower: Tuple[int, ...] = ()
  upper: Tuple[int, ...] = ()
  derivative: Tuple[str, ...] = ()

  @classmethod
  def canonical(cls, family: str, lower: Sequence[int], upper: Sequence[int],
                groups: Optional[Sequence[int]] = None,
                derivative: Iterable[str] = ()) -> "BaseFunctionSymbol":
    """Build the symbol with lower indices sorted inside each symmetric slot group.

    Args:
        family (str): Tensor family name
        lower (Sequence[int]): Lower indices as written
        upper (Sequence[int]): Upper indices
        groups (Sequence[int], optional): Sizes of the symmetric slot groups;
            one group spanning all lower slots when omitted
        derivative (Iterable[str]): Base coordinates differentiated by

    Returns:
        BaseFunctionSymbol: Canonical symbol
    """
    lower = tuple(lower)
    if groups is None:
      groups = (len(lower),) if lower else ()
    if sum(groups) != len(lower):
      raise PresentationError(
        f"Tensor {family} expects {sum(groups)} lower indices, got {len(lower)}")
    ordered = []
    start = 0
    for size in groups:
      ordered.extend(sorted(lower[start:start + size]))
      start += size
    ordered = tuple(ordered)
    if ordered != lower:
      warnings.warn(
        f"Symmetrised lower indices of {family}: {lower} -> {ordered}",
        SymmetrisationWarning)
    return cls(family, ordered, tuple(upper), tuple(sorted(derivative)))

  @classmethod
  def from_sympy(cls, expr: sp.Expr) -> "BaseFunctionSymbol":
    """Read back the symbol of an applied function or one of its derivatives."""
    derivative = ()
    if isinstance(expr, sp.Derivative):
      names = []
      for variable, count in expr.variable_count:
        names.extend([str(variable)] * int(count))
      derivative = tuple(sorted(names))
      expr = expr.expr
    if not isinstance(expr, AppliedUndef):
      raise PresentationError(f"Not a base function symbol: {expr}")
    match = FUNCTION_LABEL.match(expr.func.__name__)
    if not match:
      raise PresentationError(f"Invalid function label '{expr.func.__name__}'")
    family, lower, upper = match.groups()
    return cls(family, _indices(lower), _indices(upper), derivative)

  @property
  def label(self) -> str:
    lower = ",".join(str(i) for i in self.lower)
    upper = ",".join(str(i) for i in self.upper)
    return f"{self.family}[{lower};{upper}]"

  def applied(self, base: Sequence[sp.Symbol]) -> sp.Expr:
    """Sympy expression of the symbol evaluated at the base coordinates."""
    value = sp.Function(self.label)(*base)
    if self.derivative:
      value = sp.Derivative(value, *[sp.Symbol(n) for n in self.derivative])
    return value

  def __str__(self) -> str:
    if self.derivative:
      return f"d({','.join(self.derivative)}){self.label}"
    return self.label


def _indices(text: str) -> Tuple[int, ...]:
  return tuple(int(part) for part in text.split(",") if part)
