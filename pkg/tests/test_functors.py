"""
Tests for tangent lifts, linearisation and the flips of weight fields.
"""
import pytest

from src.algebra import GradedPolynomial
from src.bundles import (TransitionMap, identity_map, numeric_instantiate, numeric_differences,
                         presentation_differences, rename_coordinates, validate)
from src.dsl import parse
from src.errors import FunctorError
from src.functors import (canonical_sigma, compose_permutations, full_lin, full_lin_direct,
                          full_lin_morphism, higher_tangent, higher_tangent_renaming, iota,
                          iterated_tangent, lin_direct_chart, parse_permutation, plin,
                          plin_morphism, tangent_lift, transposition, vertical)
from src.functors.flips import flip, format_permutation, inverse_permutation

PLIN_F3 = """
bundle pLinF3 {
  degree (2,1);
  base x1;
  coord y1 weight (1,0);
  coord z1 weight (2,0);
  coord y1_1 weight (0,1);
  coord z1_1 weight (1,1);
  coord w1_1 weight (2,1);
  fn A[1] invertible inverse Ai;
  fn B[1] invertible inverse Bi;
  fn C[1] invertible inverse Ci;
  fn P[2];
  fn Q[1,1];
  fn R[3];
  chart U, V;
  transition U->V {
    x1 = x1;
    y1 = y1*A[1;1];
    z1 = z1*B[1;1] + 1/2*y1^2*P[1,1;1];
    y1_1 = y1_1*A[1;1];
    z1_1 = z1_1*B[1;1] + y1_1*y1*P[1,1;1];
    w1_1 = w1_1*C[1;1] + (z1_1*y1 + z1*y1_1)*Q[1,1;1] + 1/2*y1_1*y1^2*R[1,1,1;1];
  }
}
"""

PLIN_G3 = """
bundle pLinG3 {
  degree (2,1);
  base x[2];
  coord y1, y2 weight (1,0);
  coord z1 weight (2,0);
  coord y1_1, y2_1 weight (0,1);
  coord z1_1 weight (1,1);
  coord w1_1 weight (2,1);
  fn A[1] invertible inverse Ai;
  fn B[1] invertible inverse Bi;
  fn C[1] invertible inverse Ci;
  fn P[2];
  fn Q[1,1];
  fn R[3];
  chart U, V;
  transition U->V {
    x1 = x1 + x2^2;
    x2 = x2;
    y1 = y1*A[1;1] + y2*A[2;1];
    y2 = y1*A[1;2] + y2*A[2;2];
    z1 = z1*B[1;1] + 1/2*y1^2*P[1,1;1] + y1*y2*P[1,2;1] + 1/2*y2^2*P[2,2;1];
    y1_1 = y1_1*A[1;1] + y2_1*A[2;1];
    y2_1 = y1_1*A[1;2] + y2_1*A[2;2];
    z1_1 = z1_1*B[1;1] + y1_1*y1*P[1,1;1] + (y1_1*y2 + y1*y2_1)*P[1,2;1]
      + y2_1*y2*P[2,2;1];
    w1_1 = w1_1*C[1;1] + (z1_1*y1 + z1*y1_1)*Q[1,1;1] + (z1_1*y2 + z1*y2_1)*Q[1,2;1]
      + 1/2*y1^2*y1_1*R[1,1,1;1] + (y1*y1_1*y2 + 1/2*y1^2*y2_1)*R[1,1,2;1]
      + (1/2*y1_1*y2^2 + y1*y2*y2_1)*R[1,2,2;1] + 1/2*y2^2*y2_1*R[2,2,2;1];
  }
}
"""

MANIFOLD = """
bundle M {
  base x[2];
  chart U, V;
  transition U->V { x1 = x1 + x2^2; x2 = x2; }
}
"""


def test_plin_of_f3(f3):
  """pLin(F3) keeps the weight 1 and 2 tower and adds dotted copies."""
  L = plin(f3)
  assert L.name == "pLin(F3)"
  assert presentation_differences(L, parse(PLIN_F3)) == []
  assert validate(L).passed


def test_plin_needs_positive_degree():
  with pytest.raises(FunctorError):
    plin(parse(MANIFOLD))


def test_iterated_lin_of_f3(f3, law):
  """Every polarised term of the full linearisation appears with its own label."""
  L = full_lin(f3)
  assert sorted(L.names) == sorted(
    ["x1", "y1", "y1_10", "y1_01", "z1_10", "z1_01", "z1_11", "w1_11"])
  t = L.transitions[0]
  assert t.law("y1_01") == law(L, "y1_01*A[1;1]")
  assert t.law("z1_10") == law(L, "z1_10*B[1;1] + y1_10*y1*P[1,1;1]")
  assert t.law("z1_11") == law(L, "z1_11*B[1;1] + y1_10*y1_01*P[1,1;1]")
  assert t.law("w1_11") == law(
    L, "w1_11*C[1;1] + (z1_10*y1_01 + z1_11*y1 + z1_01*y1_10)*Q[1,1;1]"
       " + y1_10*y1_01*y1*R[1,1,1;1]")
  assert validate(L).passed


@pytest.mark.parametrize("fixture", ["f2", "f3", "e1"])
def test_iterated_and_direct_lin_agree(fixture, request):
  F = request.getfixturevalue(fixture)
  iterated, _ = lin_direct_chart(F)
  assert presentation_differences(iterated, full_lin_direct(F)) == []


def test_direct_lin_of_m2_agrees_numerically(m2):
  """With a moving base the two constructions are compared at random points."""
  iterated, _ = lin_direct_chart(m2)
  direct = full_lin_direct(m2)
  instance = numeric_instantiate(direct, seed=2)
  assert numeric_differences(iterated, direct, instance, samples=5) == []


def test_plin_of_rank_two_bundle_over_moving_base(g3):
  """Mixed terms polarise with both orders of the dotted factor."""
  L = plin(g3)
  assert presentation_differences(L, parse(PLIN_G3)) == []
  assert validate(L).passed


def test_tangent_lift_differentiates_base_functions(g3, law):
  TG = tangent_lift(g3)
  t = TG.transitions[0]
  assert t.law("x1_1") == law(TG, "x1_1 + 2*x2*x2_1")
  assert t.law("y1_1") == law(
    TG, "y1_1*A[1;1] + y2_1*A[2;1]"
        " + y1*(x1_1*d(x1)A[1;1] + x2_1*d(x2)A[1;1])"
        " + y2*(x1_1*d(x1)A[2;1] + x2_1*d(x2)A[2;1])")
  assert validate(TG).passed


def test_iterated_lin_of_rank_two_bundle(g3, law):
  L = full_lin(g3)
  assert L.transitions[0].law("z1_11") == law(
    L, "z1_11*B[1;1] + y1_10*y1_01*P[1,1;1] + (y1_10*y2_01 + y1_01*y2_10)*P[1,2;1]"
       " + y2_10*y2_01*P[2,2;1]")
  assert validate(L).passed


def test_direct_lin_of_degree_four_agrees_numerically(f4):
  """Above degree 3 the constructions are compared at 20 seeded points."""
  iterated, _ = lin_direct_chart(f4)
  direct = full_lin_direct(f4)
  assert validate(direct).passed
  instance = numeric_instantiate(direct, seed=20)
  assert numeric_differences(iterated, direct, instance, samples=20) == []


def test_direct_lin_names(f3):
  names = set(full_lin_direct(f3).names)
  assert {"y1_100", "y1_010", "z1_110", "w1_111"} <= names
  assert "w1_110" not in names


def test_direct_lin_refuses_multigraded(document):
  with pytest.raises(FunctorError):
    full_lin_direct(document("skew.spec").bundle())


def test_iota_scales_dotted_coordinates(f3):
  embedding = iota(f3)
  assert embedding.law("y1_1") == GradedPolynomial("y1")
  assert embedding.law("z1_1") == GradedPolynomial("2*z1")
  assert embedding.law("w1_1") == GradedPolynomial("3*w1")
  assert embedding.law("z1") == GradedPolynomial("z1")


def test_tangent_lift_of_vector_bundle(e1):
  TE = tangent_lift(e1)
  assert TE.n == 2
  assert TE.weights["y1_1"].components == (1, 1)
  assert TE.weights["x1_1"].components == (0, 1)
  law = TE.transitions[0].law("y1_1")
  assert "x1_1" in law.coordinates()
  assert validate(TE).passed


def test_vertical_drops_base_dots(e1):
  VE = vertical(e1)
  assert VE.name == "VE1"
  assert "x1_1" not in VE.names
  assert VE.weights["y1_1"].components == (0, 1)


def test_lifted_identity_is_identity(f3):
  phi = identity_map(f3.coordinates, "F3", "F3")
  assert plin_morphism(phi, f3, f3).is_identity()


def test_full_lin_of_scaling_morphism(f2, law):
  """Scaling by the weight commutes with the transitions and linearises term by term."""
  laws = {"x1": "x1", "y1": "2*y1", "y2": "2*y2", "z1": "4*z1"}
  phi = TransitionMap("F2", "F2", {name: law(f2, text) for name, text in laws.items()})
  lifted = full_lin_morphism(phi, f2, f2)
  assert lifted.law("z1_11") == GradedPolynomial("4*z1_11")
  assert lifted.law("y2_01") == GradedPolynomial("2*y2_01")


def test_higher_tangent_normalisations():
  M = parse(MANIFOLD)
  taylor = higher_tangent(M, 2).transitions[0]
  derivative = higher_tangent(M, 2, normalisation="derivative").transitions[0]
  assert taylor.law("x1_1") == GradedPolynomial("x1_1 + 2*x2*x2_1")
  assert taylor.law("x1_2") == GradedPolynomial("x1_2 + x2_1^2 + 2*x2*x2_2")
  assert derivative.law("x1_2") == GradedPolynomial("x1_2 + 2*x2_1^2 + 2*x2*x2_2")
  with pytest.raises(FunctorError):
    higher_tangent(M, 2, normalisation="jet")


def test_tangent_of_higher_tangent_is_its_linearisation():
  """T T^1 M renamed agrees with pLin(T^2 M)."""
  M = parse(MANIFOLD)
  lifted = rename_coordinates(tangent_lift(higher_tangent(M, 1)),
                              higher_tangent_renaming(M, 2))
  assert presentation_differences(lifted, plin(higher_tangent(M, 2))) == []


def test_higher_tangent_needs_base_manifold(f3):
  with pytest.raises(FunctorError):
    higher_tangent(f3, 2)


def test_iterated_tangent_of_manifold():
  T2 = iterated_tangent(parse(MANIFOLD), 2)
  assert T2.n == 2
  assert len(T2.names) == 8
  assert T2.weights["x1_11"].components == (1, 1)


def test_permutation_text():
  assert parse_permutation("2,1,3") == (1, 0, 2)
  assert format_permutation((1, 0, 2)) == "2,1,3"
  for bad in ("1,1", "2,3", "a,b"):
    with pytest.raises(ValueError):
      parse_permutation(bad)


def test_permutation_algebra():
  g, h = (1, 2, 0), transposition(3, 0, 1)
  assert compose_permutations(g, h) == (2, 1, 0)
  assert compose_permutations(g, inverse_permutation(g)) == (0, 1, 2)


def test_flip_reads_permuted_slots(document):
  D = document("skew.spec").bundle()
  flipped = flip(D, (1, 0))
  assert flipped.name == "S2^(2,1)"
  assert flipped.weights["y1_10"].components == (0, 1)
  assert flip(D, (0, 1)) is D
  with pytest.raises(FunctorError):
    flip(D, (0, 0))


def test_canonical_flip_permutes_labels(f3):
  L = full_lin_direct(f3)
  sigma = canonical_sigma(L, transposition(3, 0, 1))
  assert sigma.law("y1_100") == GradedPolynomial("y1_010")
  assert sigma.law("z1_101") == GradedPolynomial("z1_011")
  assert sigma.law("w1_111") == GradedPolynomial("w1_111")
