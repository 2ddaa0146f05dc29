"""
Permutations of weight fields: flips D^g and the canonical flips of Lin(F).

Permutations are 0-based image tuples; ``compose_permutations(g1, g2)`` is
``g1 g2`` acting as ``i -> g1[g2[i]]``, so that (D^g1)^g2 = D^(g1 g2).
"""
import itertools
from collections import OrderedDict
from typing import Dict, List, Sequence, Tuple

from src.algebra.polynomial import GradedPolynomial
from src.bundles.presentation import GradedBundlePresentation, TransitionMap
from src.bundles.surgery import regrade
from src.bundles.validation import intertwining_differences, validate_morphism
from src.errors import FunctorError

Permutation = Tuple[int, ...]


def identity_permutation(k: int) -> Permutation:
  return tuple(range(k))


def compose_permutations(g1: Sequence[int], g2: Sequence[int]) -> Permutation:
  return tuple(g1[g2[i]] for i in range(len(g2)))


def inverse_permutation(g: Sequence[int]) -> Permutation:
  inverse = [0] * len(g)
  for i, image in enumerate(g):
    inverse[image] = i
  return tuple(inverse)


def transposition(k: int, i: int, j: int) -> Permutation:
  g = list(range(k))
  g[i], g[j] = j, i
  return tuple(g)


def adjacent_transpositions(k: int) -> List[Permutation]:
  return [transposition(k, i, i + 1) for i in range(k - 1)]


def all_permutations(k: int) -> List[Permutation]:
  return [tuple(p) for p in itertools.permutations(range(k))]


def parse_permutation(text: str) -> Permutation:
  """
  Read a 1-based image list such as ``2,1,3``.

  Raises:
      ValueError: If the text is not a permutation
  """
  try:
    images = tuple(int(part) - 1 for part in text.replace(" ", "").split(",") if part)
  except ValueError:
    raise ValueError(f"Invalid permutation '{text}'")
  if sorted(images) != list(range(len(images))):
    raise ValueError(f"Invalid permutation '{text}'")
  return images


def format_permutation(g: Sequence[int]) -> str:
  return ",".join(str(i + 1) for i in g)


def flip(D: GradedBundlePresentation, g: Sequence[int]) -> GradedBundlePresentation:
  """
  D^g: same coordinates and laws with slot i of every weight read from slot g(i).

  Raises:
      FunctorError: If g does not permute the weight fields of D
  """
  if sorted(g) != list(range(D.n)):
    raise FunctorError(f"{tuple(g)} does not permute {D.n} weight fields", D.name)
  if tuple(g) == identity_permutation(D.n):
    return D
  return regrade(D, lambda w: w.permuted(g), name=f"{D.name}^({format_permutation(g)})")


def _partners(D: GradedBundlePresentation) -> Dict[Tuple, str]:
  k = D.n
  table = {}
  for c in D.coordinates:
    key = (c.family, c.index, c.lift[:len(c.lift) - k], c.weight.components)
    table[key] = c.name
  return table


def canonical_sigma(Lin: GradedBundlePresentation, g: Sequence[int]) -> TransitionMap:
  """
  The canonical flip kappa_g : Lin(F) -> Lin(F)^g in the direct chart.

  The law of a coordinate of weight eps is its partner of weight eps.g, a pure
  permutation of the polarisation labels.

  Args:
      Lin (GradedBundlePresentation): Output of full_lin_direct (or T^(k)M)
      g (Sequence[int]): Permutation of the k weight fields

  Returns:
      TransitionMap: The flip, keyed by the coordinates of Lin^g

  Raises:
      FunctorError: If a partner is missing or the flip does not intertwine
  """
  k = Lin.n
  table = _partners(Lin)
  laws = OrderedDict()
  for c in Lin.coordinates:
    target = c.weight.permuted(g)
    key = (c.family, c.index, c.lift[:len(c.lift) - k], target.components)
    if key not in table:
      raise FunctorError(f"No partner of weight {target} for '{c.name}'", Lin.name)
    laws[c.name] = GradedPolynomial.of(table[key])
  sigma = TransitionMap(Lin.name, f"{Lin.name}^({format_permutation(g)})", laws)

  report = validate_morphism(sigma, Lin, Lin, target_weights=flip(Lin, g).weights,
                             intertwine=False)
  if not report.passed:
    raise FunctorError(f"Canonical flip is not homogeneous: {report.failures()[0].detail}",
                       Lin.name)
  differences = intertwining_differences(sigma, Lin, Lin)
  if differences:
    raise FunctorError(f"Canonical flip does not intertwine: {differences[0]}", Lin.name)
  return sigma
