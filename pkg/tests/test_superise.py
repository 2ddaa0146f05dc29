"""
Tests for the Z2^k sign rule and the superisation of k-fold vector bundles.
"""
import pytest
from hypothesis import given, strategies as st

from src.algebra import MultiWeight
from src.dsl import parse
from src.errors import SuperisationError
from src.functors import full_lin_direct, iterated_tangent
from src.superise import (Z2kDegree, naive_superisation_report, sign_violations, superise,
                          z2k_sign_check)


def core_law_bundle(coefficients):
  """Rank-2 double vector bundle whose core law has the given bilinear coefficients."""
  terms = " ".join(f"+ {c}*y{a + 1}_10*y{b + 1}_01"
                   for (a, b), c in coefficients.items() if c)
  return parse(f"""
  bundle H {{
    degree (1,1);
    base x1;
    coord y1_10, y2_10 weight (1,0);
    coord y1_01, y2_01 weight (0,1);
    coord z1_11 weight (1,1);
    chart U, V;
    transition U->V {{
      x1 = x1;
      y1_10 = y1_10; y2_10 = y2_10; y1_01 = y1_01; y2_01 = y2_01;
      z1_11 = z1_11 {terms};
    }}
  }}
  """)


def test_degree_arithmetic():
  a = Z2kDegree.of(MultiWeight((1, 0)))
  b = Z2kDegree.of(MultiWeight((1, 1)))
  assert a.parity == 1
  assert b.parity == 0
  assert a.sign(b) == -1
  assert a.sign(Z2kDegree((0, 1))) == 1
  assert str(b) == "(1,1)"


def test_sign_check_names_offending_pair(document):
  report = z2k_sign_check(document("bad_sign.spec").bundle())
  assert not report.passed
  detail = report.check("U->V sign rule").detail
  assert "u1" in detail and "u2" in detail


def test_sign_check_passes_on_linearisation(f3):
  assert z2k_sign_check(full_lin_direct(f3)).passed


def test_sign_check_without_transitions(document):
  report = z2k_sign_check(document("skew.spec").bundle())
  assert report.passed
  assert report.check("sign rule").detail == "no transitions"


def test_non_euler_weights_are_refused(f3):
  with pytest.raises(SuperisationError):
    z2k_sign_check(f3)
  with pytest.raises(SuperisationError):
    superise(f3)


def test_superise_tags_degrees(document):
  result = superise(document("dvb.spec").bundle())
  assert result.presentation.name == "Pi(T)"
  assert str(result.degrees["z1_11"]) == "(1,1)"
  assert result.parities["z1_11"] == 0
  assert result.odd() == ["y1_10", "y1_01"]
  assert result.table[((1, 0), (1, 1))] == -1
  assert result.table[((1, 0), (0, 1))] == 1
  assert result.to_dict()["parities"]["y1_10"] == 1


def test_superise_refuses_sign_violations(document):
  with pytest.raises(SuperisationError) as e:
    superise(document("bad_sign.spec").bundle())
  assert "u1" in str(e.value)


def test_naive_superisation_collapses_squares(f2, e1):
  """Odd tagging by weight parity kills the y1^2 terms of a degree-2 law."""
  report = naive_superisation_report(f2)
  assert not report.check("U->V z1 survives").passed
  assert naive_superisation_report(e1).passed


@given(st.dictionaries(st.tuples(st.integers(0, 1), st.integers(0, 1)),
                       st.integers(-4, 4), max_size=4))
def test_bilinear_core_laws_satisfy_sign_rule(coefficients):
  assert sign_violations(core_law_bundle(coefficients)) == []


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_iterated_tangent_bundles_satisfy_the_sign_rule(manifold, k):
  assert z2k_sign_check(iterated_tangent(manifold, k)).passed
