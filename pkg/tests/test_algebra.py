"""
Tests for graded polynomials, weights and base function symbols.
"""
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from src.algebra import (BaseFunctionSymbol, CoordinateSymbol, GradedPolynomial,
                         MultiWeight, formal_partial, poly_arith, substitute, weight_check)
from src.algebra.symbols import SymmetrisationWarning
from src.errors import MissingAssignmentError, PresentationError

X = [sp.Symbol("x1"), sp.Symbol("x2")]
WEIGHTS = {
  "x1": MultiWeight((0,)), "x2": MultiWeight((0,)),
  "y1": MultiWeight((1,)), "y2": MultiWeight((1,)), "z1": MultiWeight((2,)),
}

exponents = st.lists(st.integers(min_value=0, max_value=2), min_size=3, max_size=3)
coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def tensor(label_family, lower=(), upper=(1,), derivative=()):
  return BaseFunctionSymbol(label_family, tuple(lower), tuple(upper),
                            tuple(derivative)).applied(X)


@st.composite
def polynomials(draw):
  """Small polynomials in y1, y2 with coefficients involving one base function."""
  y1, y2 = sp.Symbol("y1"), sp.Symbol("y2")
  terms = draw(st.lists(st.tuples(coefficients, exponents), min_size=1, max_size=3))
  expr = sp.Integer(0)
  for coefficient, (a, b, c) in terms:
    expr += sp.Rational(coefficient.numerator, coefficient.denominator) \
      * y1**a * y2**b * tensor("A", (1,))**c
  return GradedPolynomial(expr)


def test_canonical_form_ignores_input_order():
  """Equal polynomials written differently compare equal."""
  p = GradedPolynomial("y1*(y2 + 1) - y2")
  q = GradedPolynomial("y2*y1 + y1 - y2")
  assert p == q
  assert p.terms == q.terms


def test_float_coefficients_are_rejected():
  with pytest.raises(PresentationError):
    GradedPolynomial(sp.Float(0.5) * sp.Symbol("y1"))


def test_division_by_rational_only():
  p = GradedPolynomial("y1^2") / 2
  assert p == GradedPolynomial(sp.Rational(1, 2) * sp.Symbol("y1")**2)
  with pytest.raises(ValueError):
    GradedPolynomial("y1") / sp.Symbol("x1")


def test_coordinates_and_functions_are_read_off():
  """Coordinates are the polynomial factors; tensors are reported separately."""
  p = GradedPolynomial(sp.Symbol("y1") * tensor("A", (1,)) + sp.Symbol("z1"))
  assert p.coordinates() == {"y1", "z1"}
  assert p.functions() == {BaseFunctionSymbol("A", (1,), (1,))}


def test_tensor_lower_indices_are_symmetrised_with_warning():
  with pytest.warns(SymmetrisationWarning):
    symbol = BaseFunctionSymbol.canonical("P", (2, 1), (1,))
  assert symbol.lower == (1, 2)


def test_tensor_groups_are_symmetrised_separately():
  """Lower slots of different types are never exchanged."""
  symbol = BaseFunctionSymbol.canonical("Q", (2, 1), (1,), groups=(1, 1))
  assert symbol.lower == (2, 1)
  with pytest.raises(PresentationError):
    BaseFunctionSymbol.canonical("Q", (2,), (1,), groups=(1, 1))


def test_function_label_round_trip():
  symbol = BaseFunctionSymbol("T", (1, 2), (3,), ("x1", "x2"))
  assert str(symbol) == "d(x1,x2)T[1,2;3]"
  assert BaseFunctionSymbol.from_sympy(symbol.applied(X)) == symbol


def test_partial_by_base_coordinate_extends_derivative():
  """Base functions are differentiated formally; fibre derivatives kill them."""
  p = GradedPolynomial(sp.Symbol("y1") * tensor("A", (1,)))
  by_base = formal_partial(p, "x1")
  assert by_base.functions() == {BaseFunctionSymbol("A", (1,), (1,), ("x1",))}
  by_fibre = formal_partial(p, "y1")
  assert by_fibre == GradedPolynomial(tensor("A", (1,)))
  assert formal_partial(by_fibre, "y1").is_zero()


def test_weight_check_reports_offending_terms():
  p = GradedPolynomial("z1 + y1*y2 + y1")
  result = weight_check(p, WEIGHTS, 0)
  assert not result.homogeneous
  assert any("y1 (degree 1)" in term for term in result.offending)
  assert weight_check(GradedPolynomial("z1 + y1*y2"), WEIGHTS, 0).degree == 2


def test_weight_check_unknown_coordinate():
  with pytest.raises(PresentationError):
    weight_check(GradedPolynomial("w7"), WEIGHTS, 0)


def test_strict_substitution_requires_coverage():
  p = GradedPolynomial("y1*y2")
  with pytest.raises(MissingAssignmentError):
    substitute(p, {"y1": GradedPolynomial("z1")}, strict=True)
  assert substitute(p, {"y1": "y2"}) == GradedPolynomial("y2^2")


def test_substitution_of_base_coordinate_reaches_function_arguments():
  """Moving the base re-evaluates every base function at the new point."""
  p = GradedPolynomial(sp.Symbol("y1") * tensor("A", (1,)))
  moved = substitute(p, {"x1": GradedPolynomial("x2")})
  assert sp.Function("A[1;1]")(X[1], X[1]) in moved.expr.atoms(sp.core.function.AppliedUndef)


def test_poly_arith_dispatch():
  a, b = GradedPolynomial("y1"), GradedPolynomial("y2")
  assert poly_arith(a, b, "add") == GradedPolynomial("y1 + y2")
  assert poly_arith(a, b, "mul") == GradedPolynomial("y1*y2")
  with pytest.raises(ValueError):
    poly_arith(a, b, "div")


def test_negative_weight_rejected():
  with pytest.raises(PresentationError):
    MultiWeight((1, -1))


def test_weight_permutation_reads_slots():
  assert MultiWeight((1, 0, 1)).permuted((1, 0, 2)).components == (0, 1, 1)
  assert MultiWeight((1, 1)).is_euler()
  assert not MultiWeight((2, 0)).is_euler()


def test_coordinate_names():
  c = CoordinateSymbol.from_name("z1_011", MultiWeight((0, 1, 1)))
  assert (c.family, c.index, c.lift) == ("z", 1, (0, 1, 1))
  assert c.name == "z1_011"
  assert CoordinateSymbol.from_name("y2", MultiWeight((1, 0)), depth=2).lift == (0, 0)
  assert c.lifted(1).name == "z1_0111"
  with pytest.raises(PresentationError):
    CoordinateSymbol.from_name("1y", MultiWeight((1,)))


@given(polynomials(), polynomials(), polynomials())
def test_distributivity(a, b, c):
  assert (a + b) * c == a * c + b * c


@given(polynomials(), polynomials())
def test_leibniz_rule(a, b):
  for variable in ("y1", "x1"):
    left = formal_partial(a * b, variable)
    right = formal_partial(a, variable) * b + a * formal_partial(b, variable)
    assert left == right


@given(polynomials())
def test_partials_commute(p):
  assert formal_partial(formal_partial(p, "x1"), "x2") == \
    formal_partial(formal_partial(p, "x2"), "x1")
  assert formal_partial(formal_partial(p, "x1"), "y1") == \
    formal_partial(formal_partial(p, "y1"), "x1")
