"""
Tests for symmetric k-fold vector bundles, their diagonals and the round trip.
"""
import dataclasses

import pytest

from src.algebra import GradedPolynomial
from src.bundles import TransitionMap, presentation_differences
from src.errors import SymmetryError
from src.functors import full_lin_direct, higher_tangent, iterated_tangent
from src.symmetric import (SymmetricKFoldVB, check_morphism_symmetry, diagonalise,
                           factorial_rescaling, roundtrip_iso, sigma_coefficients, symmetrise,
                           validate_symmetric)


def structure(doc, name=None):
  D = doc.bundle(name)
  if D.name in doc.sigmas:
    return SymmetricKFoldVB(D, doc.sigmas[D.name])
  return SymmetricKFoldVB.canonical(D)


@pytest.fixture
def skew(document):
  return structure(document("skew.spec"))


def test_skew_structure_is_valid(skew):
  report = validate_symmetric(skew)
  assert report.passed, report.failures()
  names = [check.name for check in report.checks]
  assert "skew sigma" in names
  assert "core (1,2)" in names
  assert "composition (2,1)(2,1)" in names


def test_symmetric_core_coefficients_are_rejected(document):
  """A flip with symmetric sigma coefficients squares to a non-identity map."""
  report = validate_symmetric(structure(document("symmetric_sigma.spec")))
  assert not report.passed
  assert not report.check("skew sigma").passed
  assert not report.check("composition (2,1)(2,1)").passed


def test_missing_generator(document):
  with pytest.raises(SymmetryError):
    SymmetricKFoldVB(document("skew.spec").bundle(), {})


def test_sigma_coefficients(skew):
  table = sigma_coefficients(skew)["z1_11"]
  assert table[(2, 1)] == 3
  assert table[(1, 2)] == -3
  assert table[(1, 1)] == 0


def test_sigma_coefficients_need_side_adapted_flip(document):
  doc = document("skew.spec")
  sigma = doc.sigmas["S2"][(1, 0)]
  laws = dict(sigma.laws)
  laws["y1_10"] = GradedPolynomial("y2_01")
  laws["y2_10"] = GradedPolynomial("y1_01")
  swapped = SymmetricKFoldVB(doc.bundle(), {(1, 0): TransitionMap("S2", sigma.target, laws)})
  with pytest.raises(SymmetryError):
    sigma_coefficients(swapped)


def test_symmetrisation_is_equivariant(skew):
  """Averaging splits the core law evenly between the two flips."""
  z = symmetrise(skew)
  assert z.z((1, 0), 0) == GradedPolynomial("y1_10")
  assert z.z((1, 1), 0) == GradedPolynomial(
    "z1_11 + 3/2*y1_10*y2_01 - 3/2*y2_10*y1_01")
  assert z.inverse is not None


def test_conjugated_structure_keeps_coefficients(skew, law):
  laws = {"x1": "x1", "y1_10": "2*y1_10", "y2_10": "2*y2_10", "y1_01": "2*y1_01",
          "y2_01": "2*y2_01", "z1_11": "4*z1_11"}
  zeta = TransitionMap("S2", "S2", {name: law(skew.D, text) for name, text in laws.items()})
  moved = skew.transformed(zeta, name="S2'")
  assert moved.name == "S2'"
  assert validate_symmetric(moved).passed
  assert sigma_coefficients(moved)["z1_11"][(2, 1)] == 3


def test_composed_flips_of_lin_f3(f3):
  S = SymmetricKFoldVB.canonical(full_lin_direct(f3))
  assert validate_symmetric(S).passed
  cycle = S.sigma((1, 2, 0))
  assert cycle.law("y1_100") == GradedPolynomial("y1_001")


@pytest.mark.parametrize("fixture", ["f2", "f3"])
def test_rescaled_diagonal_recovers_the_bundle(fixture, request):
  F = request.getfixturevalue(fixture)
  diagonal = diagonalise(SymmetricKFoldVB.canonical(full_lin_direct(F)))
  assert diagonal.report.passed
  assert presentation_differences(factorial_rescaling(diagonal.presentation), F) == []


def test_diagonal_of_skew_structure(skew):
  diagonal = diagonalise(skew)
  assert sorted(diagonal.presentation.names) == ["x1", "y1", "y2", "z1"]
  assert diagonal.identification["y1_10"] == "y1"
  assert diagonal.identification["y1_01"] == "y1"
  assert diagonal.presentation.weights["z1"].components == (2,)


@pytest.mark.parametrize("fixture", ["f2", "f3", "e1", "m2"])
def test_roundtrip_of_full_linearisations(fixture, request):
  F = request.getfixturevalue(fixture)
  trip = roundtrip_iso(SymmetricKFoldVB.canonical(full_lin_direct(F)))
  assert trip.report.passed
  assert set(trip.iso.laws) == set(trip.lin.names)


def test_roundtrip_of_skew_structure(skew):
  """The iso reads the core through the averaged coordinate."""
  trip = roundtrip_iso(skew)
  assert trip.report.passed
  assert trip.iso.law("z1_11") == GradedPolynomial(
    "z1_11 + 3/2*y1_10*y2_01 - 3/2*y2_10*y1_01")


def test_composition_law_on_lin_of_degree_four(f4):
  """Every pair of the 24 canonical flips on Lin(F4) composes as the group does."""
  report = validate_symmetric(SymmetricKFoldVB.canonical(full_lin_direct(f4)))
  assert report.passed, report.failures()
  compositions = [c for c in report.checks if c.name.startswith("composition ")]
  assert len(compositions) == 24 * 24
  assert len([c for c in report.checks if c.name.startswith("core ")]) == 6


def test_diagonal_of_iterated_tangent_is_higher_tangent(manifold):
  """The flip-invariant points of T T M, rescaled, are the second-order tangent bundle."""
  diagonal = diagonalise(SymmetricKFoldVB.canonical(iterated_tangent(manifold, 2)))
  rescaled = factorial_rescaling(diagonal.presentation)
  assert presentation_differences(rescaled, higher_tangent(manifold, 2)) == []


def test_roundtrip_reports_missing_identification(f2, mocker):
  S = SymmetricKFoldVB.canonical(full_lin_direct(f2))
  diagonal = dataclasses.replace(diagonalise(S), identification={})
  mocker.patch("src.symmetric.diagonal.diagonalise", return_value=diagonal)
  with pytest.raises(SymmetryError) as e:
    roundtrip_iso(S)
  assert "identified with" in str(e.value)


def test_symmetric_morphism_restricts(document):
  doc = document("morphism.spec")
  result = check_morphism_symmetry(doc.maps["phi"], structure(doc, "D"), structure(doc, "E"))
  assert result.report.passed, result.report.failures()
  assert result.restriction.law("y1") == GradedPolynomial("2*y1")
  assert result.restriction.law("z1") == GradedPolynomial("4*z1 + 2*y1*y2")


def test_asymmetric_morphism_is_reported(document):
  doc = document("asymmetric_morphism.spec")
  result = check_morphism_symmetry(doc.maps["phi"], structure(doc, "D"), structure(doc, "E"))
  assert not result.report.passed
  assert not result.report.check("flip (2,1)").passed
  assert result.restriction is None
